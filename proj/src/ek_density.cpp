#include "kacroots/ek_density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

#include "kacroots/errors.hpp"

namespace kacroots {

namespace {

constexpr double kPi = std::numbers::pi;

// Taylor coefficients of A(x) = csch^2(x) - 1/x^2 (even powers of x).
constexpr double kACoeff[] = {
    -1.0 / 3.0,
    1.0 / 15.0,
    -2.0 / 189.0,
    1.0 / 675.0,
    -2.0 / 10395.0,
    1382.0 / 58046625.0,
    -4.0 / 1403325.0,
    3617.0 / 10854718875.0,
    -87734.0 / 2292899734125.0,
    349222.0 / 80596287646875.0,
    -310732.0 / 640374140030625.0,
};

// A(x) = csch^2(x) - 1/x^2, even, negative, -> -1/3 as x -> 0.
double A_of(double x) {
    double ax = std::fabs(x);
    if (ax < 0.35) {
        double x2 = ax * ax;
        double s = 0.0;
        for (int k = 10; k >= 0; --k) s = s * x2 + kACoeff[k];
        return s;
    }
    double inv2 = 1.0 / (ax * ax);
    if (ax > 350.0) return -inv2;  // csch^2 underflows
    double sh = std::sinh(ax);
    return 1.0 / (sh * sh) - inv2;
}

double csch2(double x) {
    double ax = std::fabs(x);
    if (ax > 350.0) return 0.0;
    double sh = std::sinh(ax);
    return 1.0 / (sh * sh);
}

// Radicand f_n(t) of the density.
double radicand(int n, double t) {
    t = std::fabs(t);
    const double M = static_cast<double>(n) + 1.0;
    if (t <= 0.5) {
        double d = t * t - 1.0;
        double first = 1.0 / (d * d);
        // Second term in log space; underflows gracefully to an exact 0.
        double lt = t > 0.0 ? std::log(t) : -std::numeric_limits<double>::infinity();
        double log_num = 2.0 * std::log(M) + 2.0 * static_cast<double>(n) * lt;
        double tpow = std::exp((2.0 * M) * lt);  // t^{2n+2} < 2^{-2n-2}
        double den = tpow - 1.0;
        double second = std::exp(log_num) / (den * den);
        return first - second;
    }
    double h = std::log(t);
    double psi;
    if (std::fabs(h) >= 1.0) {
        psi = csch2(h) - M * M * csch2(M * h);
    } else {
        psi = A_of(h) - M * M * A_of(M * h);
    }
    return psi / (4.0 * t * t);
}

}  // namespace

double density(int n, double t) {
    if (n < 1) throw DomainError("density: degree must be >= 1");
    if (!std::isfinite(t)) throw DomainError("density: t must be finite");
    const double M = static_cast<double>(n) + 1.0;
    double f = radicand(n, t);
    if (f < -1e-9 * M * M) throw DomainError("density: negative radicand (evaluator bug)");
    if (f < 0.0) f = 0.0;
    return std::sqrt(f) / kPi;
}

namespace {

// Gauss-Kronrod 15(7) abscissae and weights on [-1, 1] (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Panel {
    double a, b;
    double value;  // K15 estimate
    double err;    // |K15 - G7|
};

template <typename F>
Panel gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - half * kXgk[i]);
        fv[14 - i] = f(c + half * kXgk[i]);
    }
    fv[7] = f(c);
    double k15 = 0.0, g7 = 0.0;
    for (int i = 0; i < 7; ++i) k15 += kWgk[i] * (fv[i] + fv[14 - i]);
    k15 += kWgk[7] * fv[7];
    for (int i = 0; i < 3; ++i) {
        // Gauss nodes sit at the odd Kronrod indices 1, 3, 5.
        g7 += kWg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    }
    g7 += kWg[3] * fv[7];
    return {a, b, k15 * half, std::fabs((k15 - g7) * half)};
}

template <typename F>
QuadResult adaptive_quadrature(const F& f, double a, double b, double rel_tol,
                               std::int64_t max_evals) {
    QuadResult res;
    if (a == b) return res;
    auto worse = [](const Panel& x, const Panel& y) {
        if (x.err != y.err) return x.err < y.err;
        return x.a > y.a;  // deterministic tie-break
    };
    std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> heap(worse);
    heap.push(gk15(f, a, b));
    res.evaluations = 15;
    double total = heap.top().value;
    double err = heap.top().err;
    while (err > rel_tol * std::max(std::fabs(total), 1.0)) {
        if (res.evaluations + 30 > max_evals || heap.top().err == 0.0) {
            res.value = total;
            res.err_est = err;
            throw ToleranceNotMetError("quadrature tolerance not met", total, err);
        }
        Panel worst = heap.top();
        heap.pop();
        double mid = 0.5 * (worst.a + worst.b);
        Panel l = gk15(f, worst.a, mid);
        Panel r = gk15(f, mid, worst.b);
        res.evaluations += 30;
        total += l.value + r.value - worst.value;
        err += l.err + r.err - worst.err;
        heap.push(l);
        heap.push(r);
    }
    res.value = total;
    res.err_est = err;
    return res;
}

constexpr std::int64_t kMaxEvals = 2'000'000;

}  // namespace

QuadResult expected_roots(const DensityQuery& q) {
    if (q.degree < 1) throw DomainError("expected_roots: degree must be >= 1");
    if (!(q.a <= q.b)) throw DomainError("expected_roots: interval must satisfy a <= b");
    if (!(q.rel_tol > 0)) throw DomainError("expected_roots: rel_tol must be positive");
    auto f = [n = q.degree](double t) { return density(n, t); };
    return adaptive_quadrature(f, q.a, q.b, q.rel_tol, kMaxEvals);
}

QuadResult expected_roots_real_line(int degree, double rel_tol) {
    QuadResult r = expected_roots({degree, 0.0, 1.0, rel_tol / 4.0});
    r.value *= 4.0;
    r.err_est *= 4.0;
    return r;
}

double asymptotic_expectation(int n) {
    if (n < 2) throw DomainError("asymptotic_expectation: n must be >= 2");
    const double nn = static_cast<double>(n);
    return (2.0 / kPi) * std::log(nn) + 0.6257358072 + 2.0 / (kPi * nn);
}

double edge_bound(double C) {
    if (!(C > 1.0)) throw DomainError("edge_bound: C must be > 1");
    return std::log(C) / (2.0 * kPi) + 1.0;
}

}  // namespace kacroots
