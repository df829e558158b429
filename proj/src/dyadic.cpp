#include "kacroots/dyadic.hpp"

#include <cmath>
#include <stdexcept>

namespace kacroots {

void Dyadic::normalize() {
    if (mant == 0) {
        exp = 0;
        return;
    }
    mp_bitcnt_t tz = mpz_scan1(mant.get_mpz_t(), 0);
    if (tz > 0) {
        mpz_fdiv_q_2exp(mant.get_mpz_t(), mant.get_mpz_t(), tz);
        exp += static_cast<long>(tz);
    }
}

Dyadic Dyadic::from_double(double d) {
    if (!std::isfinite(d)) throw std::invalid_argument("Dyadic::from_double: non-finite input");
    // mpq_set_d is exact; the denominator of a finite double is a power of 2.
    mpq_class q;
    mpq_set_d(q.get_mpq_t(), d);
    Dyadic r;
    r.mant = q.get_num();
    r.exp = -static_cast<long>(mpz_scan1(q.get_den().get_mpz_t(), 0));
    r.normalize();
    return r;
}

mpq_class Dyadic::to_mpq() const {
    mpq_class q(mant);
    if (exp >= 0) {
        mpz_mul_2exp(q.get_num().get_mpz_t(), q.get_num().get_mpz_t(),
                     static_cast<mp_bitcnt_t>(exp));
    } else {
        mpz_mul_2exp(q.get_den().get_mpz_t(), q.get_den().get_mpz_t(),
                     static_cast<mp_bitcnt_t>(-exp));
    }
    q.canonicalize();
    return q;
}

std::string Dyadic::to_string() const {
    if (exp == 0) return mant.get_str();
    return mant.get_str() + "*2^" + std::to_string(exp);
}

namespace {
// Rewrite a and b over the common exponent min(a.exp, b.exp).
void align(const Dyadic& a, const Dyadic& b, mpz_class& ma, mpz_class& mb, long& e) {
    e = std::min(a.exp, b.exp);
    ma = a.mant;
    mb = b.mant;
    if (a.exp > e) mpz_mul_2exp(ma.get_mpz_t(), ma.get_mpz_t(), static_cast<mp_bitcnt_t>(a.exp - e));
    if (b.exp > e) mpz_mul_2exp(mb.get_mpz_t(), mb.get_mpz_t(), static_cast<mp_bitcnt_t>(b.exp - e));
}
}  // namespace

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    mpz_class ma, mb;
    long e;
    align(a, b, ma, mb, e);
    return Dyadic(ma + mb, e);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) {
    mpz_class ma, mb;
    long e;
    align(a, b, ma, mb, e);
    return Dyadic(ma - mb, e);
}

Dyadic operator*(const Dyadic& a, const Dyadic& b) { return Dyadic(a.mant * b.mant, a.exp + b.exp); }

Dyadic Dyadic::midpoint(const Dyadic& a, const Dyadic& b) {
    mpz_class ma, mb;
    long e;
    align(a, b, ma, mb, e);
    return Dyadic(ma + mb, e - 1);
}

int Dyadic::cmp(const Dyadic& a, const Dyadic& b) {
    int sa = a.sign(), sb = b.sign();
    if (sa != sb) return sa < sb ? -1 : 1;
    mpz_class ma, mb;
    long e;
    align(a, b, ma, mb, e);
    return ::cmp(ma, mb) < 0 ? -1 : (::cmp(ma, mb) > 0 ? 1 : 0);
}

}  // namespace kacroots
