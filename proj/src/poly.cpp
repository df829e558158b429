#include "kacroots/poly.hpp"

#include <algorithm>
#include <array>
#include <cassert>

#include "kacroots/errors.hpp"

namespace kacroots {

IntPolynomial::IntPolynomial(std::vector<mpz_class> c, long se) : coeffs(std::move(c)), scale_exp(se) {
    if (coeffs.empty()) coeffs.assign(1, mpz_class(0));
}

IntPolynomial IntPolynomial::from_ints(std::initializer_list<long> c, long se) {
    std::vector<mpz_class> v;
    v.reserve(c.size());
    for (long x : c) v.emplace_back(x);
    return IntPolynomial(std::move(v), se);
}

std::optional<std::size_t> IntPolynomial::effective_degree() const {
    for (std::size_t i = coeffs.size(); i-- > 0;)
        if (coeffs[i] != 0) return i;
    return std::nullopt;
}

const mpz_class& IntPolynomial::leading_coeff() const {
    auto d = effective_degree();
    if (!d) throw ZeroPolynomialError();
    return coeffs[*d];
}

bool operator==(const IntPolynomial& a, const IntPolynomial& b) {
    if (a.scale_exp != b.scale_exp) return false;
    std::size_t n = std::max(a.coeffs.size(), b.coeffs.size());
    for (std::size_t i = 0; i < n; ++i) {
        const mpz_class& ca = i < a.coeffs.size() ? a.coeffs[i] : mpz_class(0);
        const mpz_class& cb = i < b.coeffs.size() ? b.coeffs[i] : mpz_class(0);
        if (ca != cb) return false;
    }
    return true;
}

mpq_class eval_exact(const IntPolynomial& p, const mpq_class& q) {
    mpq_class acc(0);
    for (std::size_t i = p.coeffs.size(); i-- > 0;) {
        acc *= q;
        acc += p.coeffs[i];
    }
    return acc;
}

Dyadic eval_dyadic(const IntPolynomial& p, const Dyadic& x) {
    // Horner over the integers: with x = m*2^e (e <= 0 after scaling by the
    // degree), value = 2^{e*d} * sum coeffs[i] * m^i * 2^{-e*(d-i)} stays in Z.
    std::size_t d = p.formal_degree();
    if (x.exp >= 0) {
        // x is an integer times 2^exp; plain integer Horner.
        mpz_class xi = x.mant;
        mpz_mul_2exp(xi.get_mpz_t(), xi.get_mpz_t(), static_cast<mp_bitcnt_t>(x.exp));
        mpz_class acc(0);
        for (std::size_t i = p.coeffs.size(); i-- > 0;) {
            acc *= xi;
            acc += p.coeffs[i];
        }
        return Dyadic(std::move(acc), 0);
    }
    const mp_bitcnt_t k = static_cast<mp_bitcnt_t>(-x.exp);
    mpz_class acc(0), t;
    for (std::size_t i = p.coeffs.size(); i-- > 0;) {
        acc *= x.mant;
        t = p.coeffs[i];
        mpz_mul_2exp(t.get_mpz_t(), t.get_mpz_t(), k * static_cast<mp_bitcnt_t>(d - i));
        acc += t;
    }
    return Dyadic(std::move(acc), x.exp * static_cast<long>(d));
}

int sign_at(const IntPolynomial& p, const Dyadic& x) { return eval_dyadic(p, x).sign(); }

IntPolynomial derivative(const IntPolynomial& p) {
    if (p.coeffs.size() == 1) return IntPolynomial({mpz_class(0)}, p.scale_exp);
    std::vector<mpz_class> d(p.coeffs.size() - 1);
    for (std::size_t i = 1; i < p.coeffs.size(); ++i) d[i - 1] = p.coeffs[i] * static_cast<long>(i);
    return IntPolynomial(std::move(d), p.scale_exp);
}

mpz_class content(const IntPolynomial& p) {
    mpz_class g(0);
    for (const auto& c : p.coeffs) {
        if (c == 0) continue;
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

IntPolynomial primitive_part(const IntPolynomial& p) {
    mpz_class g = content(p);
    if (g == 0) throw ZeroPolynomialError("primitive_part of the zero polynomial");
    auto d = *p.effective_degree();
    std::vector<mpz_class> c(d + 1);
    for (std::size_t i = 0; i <= d; ++i) mpz_divexact(c[i].get_mpz_t(), p.coeffs[i].get_mpz_t(), g.get_mpz_t());
    return IntPolynomial(std::move(c), p.scale_exp);
}

IntPolynomial pseudo_remainder_even(const IntPolynomial& f, const IntPolynomial& g) {
    auto df = f.effective_degree();
    auto dg = g.effective_degree();
    if (!dg) throw ZeroPolynomialError("pseudo_remainder_even: zero divisor");
    assert(df && *df >= *dg);
    const mpz_class& lg = g.coeffs[*dg];
    std::size_t steps = *df - *dg + 1;
    if (steps % 2 == 1) ++steps;  // even power keeps the implicit multiplier positive

    std::vector<mpz_class> r(f.coeffs.begin(), f.coeffs.begin() + static_cast<long>(*df) + 1);
    std::size_t dr = *df;
    std::size_t used = 0;
    auto degree_of = [](const std::vector<mpz_class>& v, std::size_t from) {
        std::size_t i = from + 1;
        while (i-- > 0)
            if (v[i] != 0) return std::optional<std::size_t>(i);
        return std::optional<std::size_t>();
    };
    while (true) {
        auto cur = degree_of(r, dr);
        if (!cur || *cur < *dg) break;
        dr = *cur;
        // r <- lg * r - lead(r) * x^{dr-dg} * g
        mpz_class lead = r[dr];
        for (std::size_t i = 0; i <= dr; ++i) r[i] *= lg;
        std::size_t off = dr - *dg;
        for (std::size_t i = 0; i <= *dg; ++i) {
            mpz_submul(r[off + i].get_mpz_t(), lead.get_mpz_t(), g.coeffs[i].get_mpz_t());
        }
        assert(r[dr] == 0);
        ++used;
    }
    // Pad with the remaining multiplier so the total power is exactly `steps`.
    if (used < steps) {
        mpz_class m;
        mpz_pow_ui(m.get_mpz_t(), lg.get_mpz_t(), static_cast<unsigned long>(steps - used));
        for (auto& c : r) c *= m;
    }
    r.resize(std::max<std::size_t>(*dg, 1));
    return IntPolynomial(std::move(r), f.scale_exp);
}

IntPolynomial poly_gcd(const IntPolynomial& a, const IntPolynomial& b) {
    if (a.is_zero() && b.is_zero()) throw ZeroPolynomialError("poly_gcd(0, 0)");
    auto normalize = [](IntPolynomial p) {
        p = primitive_part(p);
        if (p.leading_coeff() < 0)
            for (auto& c : p.coeffs) c = -c;
        p.scale_exp = 0;
        return p;
    };
    if (a.is_zero()) return normalize(b);
    if (b.is_zero()) return normalize(a);

    IntPolynomial f = primitive_part(a), g = primitive_part(b);
    if (*f.effective_degree() < *g.effective_degree()) std::swap(f, g);
    while (true) {
        IntPolynomial r = pseudo_remainder_even(f, g);
        if (r.is_zero()) break;
        f = std::move(g);
        g = primitive_part(r);
    }
    return normalize(std::move(g));
}

IntPolynomial divide_exact(const IntPolynomial& p, const IntPolynomial& d) {
    auto dp = p.effective_degree();
    auto dd = d.effective_degree();
    if (!dd) throw ZeroPolynomialError("divide_exact: zero divisor");
    if (!dp) return IntPolynomial({mpz_class(0)}, p.scale_exp);
    assert(*dp >= *dd);
    std::vector<mpz_class> r(p.coeffs.begin(), p.coeffs.begin() + static_cast<long>(*dp) + 1);
    std::vector<mpz_class> q(*dp - *dd + 1);
    const mpz_class& lead_d = d.coeffs[*dd];
    for (std::size_t k = *dp - *dd + 1; k-- > 0;) {
        mpz_class& top = r[k + *dd];
        if (top == 0) continue;
        assert(mpz_divisible_p(top.get_mpz_t(), lead_d.get_mpz_t()));
        mpz_divexact(q[k].get_mpz_t(), top.get_mpz_t(), lead_d.get_mpz_t());
        for (std::size_t i = 0; i <= *dd; ++i)
            mpz_submul(r[k + i].get_mpz_t(), q[k].get_mpz_t(), d.coeffs[i].get_mpz_t());
    }
    for (const auto& c : r) {
        (void)c;
        assert(c == 0);
    }
    return IntPolynomial(std::move(q), p.scale_exp);
}

IntPolynomial squarefree_part(const IntPolynomial& p) {
    auto dp = p.effective_degree();
    if (!dp) throw ZeroPolynomialError("squarefree_part of the zero polynomial");
    if (*dp == 0) return IntPolynomial({mpz_class(1)}, 0);
    IntPolynomial g = poly_gcd(p, derivative(p));
    if (*g.effective_degree() == 0) {
        IntPolynomial r = primitive_part(p);
        r.scale_exp = 0;
        return r;
    }
    IntPolynomial q = divide_exact(primitive_part(p), g);
    q = primitive_part(q);
    q.scale_exp = 0;
    return q;
}

namespace {

// Generic 64-bit modulus.
struct ModGeneric {
    std::uint64_t q;
    std::uint64_t modulus() const { return q; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % q);
    }
};

// Mersenne prime 2^61 - 1: reduction without division.
struct Mod61 {
    static constexpr std::uint64_t kQ = (std::uint64_t(1) << 61) - 1;
    std::uint64_t modulus() const { return kQ; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        unsigned __int128 t = static_cast<unsigned __int128>(a) * b;
        std::uint64_t r = (static_cast<std::uint64_t>(t) & kQ) +
                          static_cast<std::uint64_t>(t >> 61);
        r = (r & kQ) + (r >> 61);
        return r >= kQ ? r - kQ : r;
    }
};

// Mersenne prime 2^31 - 1: products fit a single 64-bit word.
struct Mod31 {
    static constexpr std::uint64_t kQ = (std::uint64_t(1) << 31) - 1;
    std::uint64_t modulus() const { return kQ; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t t = a * b;
        std::uint64_t r = (t & kQ) + (t >> 31);
        r = (r & kQ) + (r >> 31);
        return r >= kQ ? r - kQ : r;
    }
};

template <typename Mod>
std::uint64_t powmod(const Mod& mod, std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e) {
        if (e & 1) r = mod.mul(r, a);
        a = mod.mul(a, a);
        e >>= 1;
    }
    return r;
}

// deg of gcd over Z/qZ; vectors are modified in place.
template <typename Mod>
std::size_t mod_gcd_degree(const Mod& mod, std::vector<std::uint64_t> f,
                           std::vector<std::uint64_t> g) {
    const std::uint64_t q = mod.modulus();
    auto trim = [](std::vector<std::uint64_t>& v) {
        while (!v.empty() && v.back() == 0) v.pop_back();
    };
    trim(f);
    trim(g);
    if (f.size() < g.size()) f.swap(g);
    while (!g.empty()) {
        // f <- f mod g (monic reduction)
        std::uint64_t inv = powmod(mod, g.back(), q - 2);
        while (f.size() >= g.size()) {
            std::uint64_t c = mod.mul(f.back(), inv);
            if (c != 0) {
                std::size_t off = f.size() - g.size();
                for (std::size_t i = 0; i < g.size(); ++i) {
                    std::uint64_t t = mod.mul(c, g[i]);
                    std::uint64_t& fi = f[off + i];
                    fi = fi >= t ? fi - t : fi + q - t;
                }
            }
            f.pop_back();
            trim(f);
            if (f.empty()) break;
        }
        f.swap(g);
        trim(g);
    }
    return f.empty() ? 0 : f.size() - 1;
}

template <typename Mod>
bool squarefree_mod(const Mod& mod, const IntPolynomial& p, std::size_t deg) {
    const std::uint64_t q = mod.modulus();
    if (mpz_fdiv_ui(p.coeffs[deg].get_mpz_t(), q) == 0) return false;  // unusable prime
    std::vector<std::uint64_t> f(deg + 1), g(deg);
    for (std::size_t i = 0; i <= deg; ++i) f[i] = mpz_fdiv_ui(p.coeffs[i].get_mpz_t(), q);
    for (std::size_t i = 1; i <= deg; ++i)
        g[i - 1] = mod.mul(f[i], static_cast<std::uint64_t>(i % q));
    return mod_gcd_degree(mod, std::move(f), std::move(g)) == 0;
}

}  // namespace

bool squarefree_certificate(const IntPolynomial& p) {
    auto dp = p.effective_degree();
    if (!dp) return false;
    if (*dp <= 1) return true;
    if (squarefree_mod(Mod31{}, p, *dp)) return true;
    if (squarefree_mod(Mod61{}, p, *dp)) return true;
    // Largest prime below 2^63 as the last try.
    return squarefree_mod(ModGeneric{9223372036854775783ULL}, p, *dp);
}

}  // namespace kacroots
