#pragma once
#include <gmpxx.h>

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <vector>

#include "kacroots/dyadic.hpp"

namespace kacroots {

/// Dense polynomial with arbitrary-precision integer coefficients and one
/// shared dyadic scale: the mathematical polynomial is
///     2^{-scale_exp} * sum_i coeffs[i] * x^i.
/// The root set does not depend on scale_exp, so all root counting works on
/// the integer part alone.  Trailing zero coefficients are permitted (the
/// formal degree may exceed the effective degree).
struct IntPolynomial {
    std::vector<mpz_class> coeffs;  // coeffs[i] multiplies x^i; never empty
    long scale_exp = 0;

    IntPolynomial() : coeffs(1, mpz_class(0)) {}
    explicit IntPolynomial(std::vector<mpz_class> c, long se = 0);
    static IntPolynomial from_ints(std::initializer_list<long> c, long se = 0);

    std::size_t formal_degree() const { return coeffs.size() - 1; }
    /// Largest i with coeffs[i] != 0; nullopt for the zero polynomial.
    std::optional<std::size_t> effective_degree() const;
    bool is_zero() const { return !effective_degree().has_value(); }
    /// Coefficient at the effective degree.  Throws ZeroPolynomialError.
    const mpz_class& leading_coeff() const;
};

bool operator==(const IntPolynomial& a, const IntPolynomial& b);

/// Exact value of the unscaled integer part sum coeffs[i] * q^i.
/// The caller applies 2^{-scale_exp} if the mathematical value is needed.
mpq_class eval_exact(const IntPolynomial& p, const mpq_class& q);

/// Exact unscaled value at a dyadic point (stays dyadic).
Dyadic eval_dyadic(const IntPolynomial& p, const Dyadic& x);

/// Exact sign of p at a dyadic point (scale-independent).
int sign_at(const IntPolynomial& p, const Dyadic& x);

/// Exact formal derivative; scale_exp preserved.
IntPolynomial derivative(const IntPolynomial& p);

/// gcd of all coefficients, >= 0 (0 only for the zero polynomial).
mpz_class content(const IntPolynomial& p);

/// p divided by its content (sign of p preserved).  Throws ZeroPolynomialError.
IntPolynomial primitive_part(const IntPolynomial& p);

/// Pseudo-remainder of f by g: lc(g)^k * f mod g with k chosen EVEN (so the
/// implicit multiplier is positive and Sturm sign semantics survive).
/// Requires effective_degree(f) >= effective_degree(g), g nonzero.
IntPolynomial pseudo_remainder_even(const IntPolynomial& f, const IntPolynomial& g);

/// Primitive polynomial gcd over the integers (positive leading coefficient),
/// via a primitive pseudo-remainder sequence.
IntPolynomial poly_gcd(const IntPolynomial& a, const IntPolynomial& b);

/// Exact division: returns q with p = q * d.  Asserts exactness.
IntPolynomial divide_exact(const IntPolynomial& p, const IntPolynomial& d);

/// Primitive p / gcd(p, p'): same distinct real (and complex) roots, all
/// simple.  Throws ZeroPolynomialError.
IntPolynomial squarefree_part(const IntPolynomial& p);

/// True when gcd(p, p') is certainly constant, i.e. p is squarefree.  Decided
/// by a gcd over Z/qZ for word-size primes q not dividing the leading
/// coefficient: a constant modular gcd certifies a constant integer gcd.
/// A false return is only "not certified" (the primes may have been unlucky);
/// callers fall back to the exact gcd.
bool squarefree_certificate(const IntPolynomial& p);

}  // namespace kacroots
