#include <doctest.h>

#include <mpfr.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kacroots/ek_density.hpp"
#include "kacroots/errors.hpp"

using namespace kacroots;

namespace {

constexpr double kPi = std::numbers::pi;

// 256-bit evaluation of the radicand's monomial form, used as the oracle for
// the double evaluator (no cancellation trouble at this precision for the
// points we probe).
double density_mpfr(int n, double t) {
    const mpfr_prec_t prec = 256;
    mpfr_t tt, t2, d, first, tp, den, second, f;
    mpfr_inits2(prec, tt, t2, d, first, tp, den, second, f, nullptr);
    mpfr_set_d(tt, std::fabs(t), MPFR_RNDN);
    mpfr_sqr(t2, tt, MPFR_RNDN);
    mpfr_sub_ui(d, t2, 1, MPFR_RNDN);
    mpfr_sqr(d, d, MPFR_RNDN);
    mpfr_ui_div(first, 1, d, MPFR_RNDN);  // 1/(t^2-1)^2

    mpfr_pow_ui(tp, tt, 2 * static_cast<unsigned long>(n), MPFR_RNDN);  // t^{2n}
    mpfr_mul(den, tp, t2, MPFR_RNDN);                                   // t^{2n+2}
    mpfr_sub_ui(den, den, 1, MPFR_RNDN);
    mpfr_sqr(den, den, MPFR_RNDN);
    mpfr_mul_ui(second, tp, (static_cast<unsigned long>(n) + 1) * (static_cast<unsigned long>(n) + 1),
                MPFR_RNDN);
    mpfr_div(second, second, den, MPFR_RNDN);

    mpfr_sub(f, first, second, MPFR_RNDN);
    mpfr_sqrt(f, f, MPFR_RNDN);
    double out = mpfr_get_d(f, MPFR_RNDN) / kPi;
    mpfr_clears(tt, t2, d, first, tp, den, second, f, nullptr);
    return out;
}

}  // namespace

TEST_CASE("density at t = 0 is 1/pi") {
    for (int n : {1, 2, 10, 500}) CHECK(density(n, 0.0) == doctest::Approx(1.0 / kPi).epsilon(1e-14));
}

TEST_CASE("density at t = 1 matches the closed limit") {
    for (int n : {2, 10, 100, 1000}) {
        double expect = std::sqrt(static_cast<double>(n) * (n + 2.0) / 12.0) / kPi;
        CHECK(density(n, 1.0) == doctest::Approx(expect).epsilon(1e-10));
    }
    CHECK(density(10, 1.0) == doctest::Approx(std::sqrt(10.0) / kPi).epsilon(1e-12));
}

TEST_CASE("extended-precision oracle near t = 1") {
    for (int n : {2, 10, 100, 1000}) {
        double at_one = density(n, 1.0);
        // the density is continuous: 256-bit values at 1 +- 1e-7 bracket it
        double lo = density_mpfr(n, 1.0 - 1e-7);
        double hi = density_mpfr(n, 1.0 + 1e-7);
        double mid = 0.5 * (lo + hi);
        CHECK(at_one == doctest::Approx(mid).epsilon(1e-6));
    }
}

TEST_CASE("extended-precision oracle across the evaluator's regimes") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n : {1, 3, 10, 100, 1000}) {
        for (int k = 0; k < 60; ++k) {
            double band = u(gen);
            double t;
            if (band < 0.3) t = u(gen) * 0.5;                        // monomial regime
            else if (band < 0.7) t = 0.5 + u(gen);                   // csch regime
            else t = 1.0 + 1e-6 * (u(gen) - 0.5) / (n + 1.0);        // near-1 series
            double got = density(n, t);
            double want = density_mpfr(n, t);
            CHECK_MESSAGE(got == doctest::Approx(want).epsilon(1e-11), "n=", n, " t=", t);
        }
    }
}

TEST_CASE("density is even in t") {
    std::mt19937_64 gen(6);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int k = 0; k < 200; ++k) {
        double t = u(gen);
        CHECK(density(57, t) == density(57, -t));
    }
}

TEST_CASE("degree-1 density is the Cauchy density") {
    for (double t : {0.0, 0.1, 0.5, 0.9, 0.99, 1.0, 1.5, 4.0}) {
        CHECK(density(1, t) == doctest::Approx(1.0 / (kPi * (1 + t * t))).epsilon(1e-12));
    }
}

TEST_CASE("continuity across the near-1 switch region") {
    for (int n : {10, 100, 1000}) {
        double eps = 1e-4 / (n + 1);
        for (double s : {0.5, 0.9, 0.999, 1.001, 1.1, 2.0}) {
            double a = density(n, 1.0 - eps * s);
            double b = density(n, 1.0 - eps * s * (1 + 1e-9));
            CHECK(std::fabs(a - b) <= 1e-9 * std::fabs(a) + 1e-300);
        }
    }
}

TEST_CASE("density is nonnegative at random points") {
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int n : {10, 200}) {
        for (int k = 0; k < 100000; ++k) {
            double v = density(n, u(gen));
            REQUIRE(v >= 0.0);
            REQUIRE(std::isfinite(v));
        }
    }
}

TEST_CASE("density rejects invalid input") {
    CHECK_THROWS_AS(density(0, 0.5), DomainError);
    CHECK_THROWS_AS(density(3, std::nan("")), DomainError);
}

TEST_CASE("expected_roots worked examples") {
    // n=200 over (-1/2, 1/2): (1/pi) ln 3
    QuadResult r = expected_roots({200, -0.5, 0.5, 1e-9});
    CHECK(std::fabs(r.value - std::log(3.0) / kPi) <= 1e-6);
    CHECK(r.err_est <= 1e-9 * std::max(std::fabs(r.value), 1.0));
    CHECK(r.evaluations > 0);

    // n=100 full line vs the asymptotic expansion (agreement at O(1/n^2))
    QuadResult full = expected_roots_real_line(100, 1e-10);
    CHECK(std::fabs(full.value - asymptotic_expectation(100)) <= 1e-3);

    // n=1: the density integrates to the almost-sure root count 1
    QuadResult one = expected_roots_real_line(1, 1e-10);
    CHECK(std::fabs(one.value - 1.0) <= 1e-9);
}

TEST_CASE("quadrature self-consistency under splitting") {
    for (double cut : {0.3, 0.77, 0.999}) {
        QuadResult whole = expected_roots({50, 0.0, 1.0, 1e-10});
        QuadResult a = expected_roots({50, 0.0, cut, 1e-10});
        QuadResult b = expected_roots({50, cut, 1.0, 1e-10});
        CHECK(std::fabs(whole.value - a.value - b.value) <=
              whole.err_est + a.err_est + b.err_est);
    }
}

TEST_CASE("reciprocal symmetry of the density integral") {
    for (int n : {5, 50}) {
        for (double T : {2.0, 10.0}) {
            QuadResult outer = expected_roots({n, 1.0, T, 1e-11});
            QuadResult inner = expected_roots({n, 1.0 / T, 1.0, 1e-11});
            CHECK(std::fabs(outer.value - inner.value) <=
                  1e-9 + outer.err_est + inner.err_est);
        }
    }
}

TEST_CASE("tolerance failures carry the honest estimate") {
    CHECK_THROWS_AS(expected_roots({500, 0.0, 1.0, 1e-30}), ToleranceNotMetError);
    try {
        expected_roots({500, 0.0, 1.0, 1e-30});
    } catch (const ToleranceNotMetError& e) {
        CHECK(e.value > 0);
        CHECK(e.err_est > 0);
    }
}

TEST_CASE("asymptotic_expectation values") {
    CHECK(asymptotic_expectation(100) == doctest::Approx(3.5638444).epsilon(1e-6));
    CHECK(asymptotic_expectation(10000) == doctest::Approx(6.4892843).epsilon(1e-6));
    CHECK_THROWS_AS(asymptotic_expectation(1), DomainError);

    // difference to (2/pi) ln n decreases monotonically to the constant
    double prev = 1e9;
    for (int n : {10, 100, 1000, 10000, 100000}) {
        double diff = asymptotic_expectation(n) - (2.0 / kPi) * std::log(static_cast<double>(n));
        CHECK(diff > 0.6257358072);
        CHECK(diff < prev);
        prev = diff;
    }
}

TEST_CASE("edge_bound worked examples") {
    CHECK(edge_bound(std::exp(2.0 * kPi)) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(edge_bound(1.0 + 1e-12) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(edge_bound(1.0), DomainError);
    CHECK_THROWS_AS(edge_bound(0.5), DomainError);

    // quadrature over [0, 1-1/C) stays below the closed bound
    QuadResult r = expected_roots({1000, 0.0, 1.0 - 1.0 / 100.0, 1e-9});
    CHECK(r.value <= edge_bound(100.0));
}
