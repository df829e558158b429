#pragma once
#include <gmpxx.h>

#include <compare>
#include <optional>
#include <string>

namespace kacroots {

/// Exact dyadic rational mant * 2^exp.  Every finite double converts
/// losslessly, and all arithmetic used by the root-counting code
/// (add, sub, mul, halving) stays exact.
struct Dyadic {
    mpz_class mant;
    long exp = 0;

    Dyadic() = default;
    Dyadic(mpz_class m, long e) : mant(std::move(m)), exp(e) { normalize(); }
    explicit Dyadic(long v) : mant(v), exp(0) { normalize(); }

    static Dyadic from_double(double d);

    /// Canonical form: mant odd, or mant == 0 with exp == 0.
    void normalize();

    bool is_zero() const { return mant == 0; }
    int sign() const { return sgn(mant); }

    mpq_class to_mpq() const;
    double to_double() const { return mpq_get_d(to_mpq().get_mpq_t()); }
    std::string to_string() const;

    Dyadic operator-() const { return Dyadic(-mant, exp); }
    friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator*(const Dyadic& a, const Dyadic& b);

    /// Exact (a+b)/2.
    static Dyadic midpoint(const Dyadic& a, const Dyadic& b);

    static int cmp(const Dyadic& a, const Dyadic& b);
    friend bool operator==(const Dyadic& a, const Dyadic& b) { return cmp(a, b) == 0; }
    friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
        int c = cmp(a, b);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }
};

/// Closed interval [lo, hi] with exact dyadic endpoints (lo <= hi).
struct DyadicInterval {
    Dyadic lo;
    Dyadic hi;

    Dyadic width() const { return hi - lo; }
    Dyadic midpoint() const { return Dyadic::midpoint(lo, hi); }
};

/// Half-open query range (lo, hi]; nullopt endpoints mean -inf / +inf.
struct QueryRange {
    std::optional<Dyadic> lo;
    std::optional<Dyadic> hi;

    static QueryRange full_line() { return {std::nullopt, std::nullopt}; }
    static QueryRange between(Dyadic a, Dyadic b) { return {std::move(a), std::move(b)}; }
    static QueryRange between(double a, double b) {
        return {Dyadic::from_double(a), Dyadic::from_double(b)};
    }
};

}  // namespace kacroots
