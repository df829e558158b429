#pragma once
#include <cstdint>

namespace kacroots {

/// Interval + degree + tolerance for a validated density integral.
struct DensityQuery {
    int degree = 1;          // n >= 1
    double a = 0.0;          // [a, b], a <= b
    double b = 0.0;
    double rel_tol = 1e-10;  // > 0
};

/// Validated integral: on success err_est <= rel_tol * max(|value|, 1).
struct QuadResult {
    double value = 0.0;
    double err_est = 0.0;
    std::int64_t evaluations = 0;
};

/// Expected-real-root density rho_n(t) of the degree-n Gaussian Kac
/// polynomial:
///
///   rho_n(t) = (1/pi) sqrt( 1/(t^2-1)^2 - (n+1)^2 t^{2n} / (t^{2n+2}-1)^2 ).
///
/// Near |t| = 1 both terms blow up like (t-1)^{-2} while their difference
/// stays O(n^2); the evaluator rewrites the radicand with h = ln|t| and
/// M = n+1 as
///
///   f_n = [csch^2(h) - M^2 csch^2(Mh)] / (4 t^2)
///       = [A(h) - M^2 A(Mh)] / (4 t^2),   A(x) = csch^2(x) - 1/x^2,
///
/// in which the 1/h^2 singularities cancel exactly; A is evaluated by its
/// Taylor series for small |x|.  For |t| <= 1/2 the monomial form is already
/// stable and the second term underflows to an exact 0 for large n.
///
/// Throws DomainError if the radicand is negative beyond rounding noise
/// (which would signal an evaluator bug).
double density(int n, double t);

/// Adaptive Gauss-Kronrod 15(7) integral of density(n, .) over [a, b].
/// Throws ToleranceNotMetError (carrying the best value and honest err_est)
/// if the tolerance cannot be met within the evaluation budget.
QuadResult expected_roots(const DensityQuery& q);

/// Full-line convenience mode: 4 * integral over [0, 1].
QuadResult expected_roots_real_line(int degree, double rel_tol = 1e-10);

/// (2/pi) ln n + 0.6257358072 + 2/(pi n); accurate to O(1/n^2).  n >= 2.
double asymptotic_expectation(int n);

/// Closed Gaussian edge bound for E N[0, 1 - 1/C):  (1/(2 pi)) ln C + 1.
/// Throws DomainError for C <= 1.
double edge_bound(double C);

}  // namespace kacroots
