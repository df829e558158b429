// Test-only oracles, independent of the implementation paths they check.
#pragma once
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "kacroots/poly.hpp"

namespace oracles {

using kacroots::IntPolynomial;

// Naive power-expansion evaluation: sum coeffs[i] * q^i with explicit powers.
inline mpq_class naive_eval(const IntPolynomial& p, const mpq_class& q) {
    mpq_class sum(0), power(1);
    for (const auto& c : p.coeffs) {
        sum += mpq_class(c) * power;
        power *= q;
    }
    return sum;
}

inline IntPolynomial multiply(const IntPolynomial& a, const IntPolynomial& b) {
    std::vector<mpz_class> c(a.coeffs.size() + b.coeffs.size() - 1);
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs.size(); ++j) c[i + j] += a.coeffs[i] * b.coeffs[j];
    return IntPolynomial(std::move(c), a.scale_exp + b.scale_exp);
}

inline IntPolynomial random_poly(std::mt19937_64& gen, int max_degree, long bound) {
    std::uniform_int_distribution<int> deg(0, max_degree);
    std::uniform_int_distribution<long> coef(-bound, bound);
    std::vector<mpz_class> c(static_cast<std::size_t>(deg(gen)) + 1);
    for (auto& x : c) x = coef(gen);
    return IntPolynomial(std::move(c), 0);
}

inline IntPolynomial random_nonzero_poly(std::mt19937_64& gen, int max_degree, long bound) {
    while (true) {
        IntPolynomial p = random_poly(gen, max_degree, bound);
        if (!p.is_zero()) return p;
    }
}

// Floating companion-matrix root count.  Returns nullopt when eigenvalues sit
// too close to the real axis (or to each other) for double precision to call.
inline std::optional<int> companion_real_root_count(const IntPolynomial& p) {
    auto d = p.effective_degree();
    if (!d || *d == 0) return std::nullopt;
    const std::size_t n = *d;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<long>(n), static_cast<long>(n));
    double lead = p.coeffs[n].get_d();
    for (std::size_t i = 0; i < n; ++i) {
        m(static_cast<long>(i), static_cast<long>(n - 1)) = -p.coeffs[i].get_d() / lead;
        if (i + 1 < n) m(static_cast<long>(i + 1), static_cast<long>(i)) = 1.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
    if (solver.info() != Eigen::Success) return std::nullopt;
    std::vector<double> reals;
    double scale = 0;
    for (long i = 0; i < solver.eigenvalues().size(); ++i)
        scale = std::max(scale, std::abs(solver.eigenvalues()[i]));
    for (long i = 0; i < solver.eigenvalues().size(); ++i) {
        auto ev = solver.eigenvalues()[i];
        double im = std::abs(ev.imag());
        if (im > 1e-8 * scale && im < 1e-4 * scale) return std::nullopt;  // ambiguous
        if (im <= 1e-8 * scale) reals.push_back(ev.real());
    }
    std::sort(reals.begin(), reals.end());
    for (std::size_t i = 0; i + 1 < reals.size(); ++i)
        if (reals[i + 1] - reals[i] < 1e-5 * std::max(1.0, scale)) return std::nullopt;
    return static_cast<int>(reals.size());
}

}  // namespace oracles
