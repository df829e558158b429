#include <algorithm>
#include <cassert>
#include <cstdint>
#include <memory>

#include "kacroots/errors.hpp"
#include "kacroots/root_count.hpp"

namespace kacroots {

namespace {

void trim_leading_zeros(std::vector<mpz_class>& c) {
    while (c.size() > 1 && c.back() == 0) c.pop_back();
}

// Divide out the largest common power of two to slow coefficient growth.
void strip_pow2_content(std::vector<mpz_class>& c) {
    mp_bitcnt_t tz = ~static_cast<mp_bitcnt_t>(0);
    for (const auto& x : c) {
        if (x == 0) continue;
        tz = std::min(tz, mpz_scan1(x.get_mpz_t(), 0));
        if (tz == 0) return;
    }
    if (tz == ~static_cast<mp_bitcnt_t>(0)) return;
    for (auto& x : c)
        if (x != 0) mpz_fdiv_q_2exp(x.get_mpz_t(), x.get_mpz_t(), tz);
}

mpz_class eval_at_one(const std::vector<mpz_class>& c) {
    mpz_class s(0);
    for (const auto& x : c) s += x;
    return s;
}

mpz_class eval_at_minus_one(const std::vector<mpz_class>& c) {
    mpz_class s(0);
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i % 2 == 0) s += c[i];
        else s -= c[i];
    }
    return s;
}

// c(1/2) scaled by 2^deg.
mpz_class eval_at_half_scaled(const std::vector<mpz_class>& c) {
    mpz_class s(0), t;
    const std::size_t d = c.size() - 1;
    for (std::size_t i = 0; i < c.size(); ++i) {
        t = c[i];
        mpz_mul_2exp(t.get_mpz_t(), t.get_mpz_t(), static_cast<mp_bitcnt_t>(d - i));
        s += t;
    }
    return s;
}

// Exact division by (x - 1); requires c(1) == 0.
std::vector<mpz_class> divide_by_x_minus_1(const std::vector<mpz_class>& c) {
    const std::size_t d = c.size() - 1;
    assert(d >= 1);
    std::vector<mpz_class> q(d);
    q[d - 1] = c[d];
    for (std::size_t k = d - 1; k >= 1; --k) q[k - 1] = c[k] + q[k];
    assert(c[0] == -q[0]);
    return q;
}

// Exact division by (x + 1); requires c(-1) == 0.
std::vector<mpz_class> divide_by_x_plus_1(const std::vector<mpz_class>& c) {
    const std::size_t d = c.size() - 1;
    assert(d >= 1);
    std::vector<mpz_class> q(d);
    q[d - 1] = c[d];
    for (std::size_t k = d - 1; k >= 1; --k) q[k - 1] = c[k] - q[k];
    assert(c[0] == q[0]);
    return q;
}

// Descartes variation bound for the open interval (0,1):
// variations of (1+x)^d c(1/(1+x)).
int variation_bound_01(const std::vector<mpz_class>& c) {
    std::vector<mpz_class> w(c.rbegin(), c.rend());
    detail::taylor_shift_1(w);
    return detail::sign_variations(w);
}

// Left-half child: c(x/2) cleared to integers.
std::vector<mpz_class> left_half(const std::vector<mpz_class>& c) {
    const std::size_t d = c.size() - 1;
    std::vector<mpz_class> q(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        q[i] = c[i];
        mpz_mul_2exp(q[i].get_mpz_t(), q[i].get_mpz_t(), static_cast<mp_bitcnt_t>(d - i));
    }
    strip_pow2_content(q);
    return q;
}

long depth_cap_for(const std::vector<mpz_class>& c) {
    std::size_t bits = 1;
    for (const auto& x : c)
        if (x != 0) bits = std::max(bits, mpz_sizeinbase(x.get_mpz_t(), 2));
    const long d = static_cast<long>(c.size());
    // Generous multiple of the worst-case bisection depth implied by root
    // separation bounds for integer polynomials.
    return d * (static_cast<long>(bits) + 64) + 64;
}

struct IsolationSink {
    std::vector<DyadicInterval>* out = nullptr;  // null when only counting
    Dyadic lo;                                   // maps (0,1) back to x-space
    Dyadic w;

    void exact_root(const Dyadic& t) const {
        if (!out) return;
        Dyadic x = lo + w * t;
        out->push_back({x, x});
    }
    void isolating(const Dyadic& t0, const Dyadic& t1) const {
        if (!out) return;
        out->push_back({lo + w * t0, lo + w * t1});
    }
};

// ---------------------------------------------------------------------------
// Fixed-precision interval filter.
//
// Exact subdivision polynomials gain ~degree bits per bisection level, which
// dominates the cost at Monte Carlo scale.  Sign-variation tests rarely need
// that precision, so the recursion runs on 47-bit-mantissa interval floats
// with outward rounding: certified decisions are exact, and ambiguous nodes
// replay their subdivision steps from the nearest arbitrary-precision
// snapshot.  The mpz kernels above stay as the reference path; the two are
// equivalence-tested.
// ---------------------------------------------------------------------------

struct Fx {
    std::int64_t m = 0;  // value = m * 2^e, |m| <= 2^47
    std::int64_t e = kZeroExp;

    static constexpr std::int64_t kZeroExp = std::int64_t(-1) << 56;
};

constexpr std::int64_t kFxCap = std::int64_t(1) << 47;

inline Fx fx_make(std::int64_t m, std::int64_t e, bool round_up) {
    if (m == 0) return {};
    std::uint64_t mag = static_cast<std::uint64_t>(m < 0 ? -m : m);
    int bits = 64 - __builtin_clzll(mag);
    if (bits <= 47) return {m, e};
    int s = bits - 47;
    std::int64_t q = m >> s;
    if (round_up && (m & ((std::int64_t(1) << s) - 1))) ++q;
    return {q, e + s};
}

// Floor-rounded a + b; the zero exponent sentinel keeps zeros inert.
inline Fx fx_add_down(const Fx& a, const Fx& b) {
    const bool a_big = a.e >= b.e;
    const Fx& big = a_big ? a : b;
    const Fx& small = a_big ? b : a;
    const std::int64_t d = big.e - small.e;
    if (d > 50) [[unlikely]] {
        if (small.m >= 0) return big;
        return fx_make(big.m - 1, big.e, false);
    }
    std::int64_t m = big.m + (small.m >> d);
    std::int64_t e = big.e;
    if (m == 0) return {};
    const std::int64_t over = (m > kFxCap) | (m < -kFxCap);
    m >>= over;
    e += over;
    return {m, e};
}

// Ceil-rounded a + b.
inline Fx fx_add_up(const Fx& a, const Fx& b) {
    const bool a_big = a.e >= b.e;
    const Fx& big = a_big ? a : b;
    const Fx& small = a_big ? b : a;
    const std::int64_t d = big.e - small.e;
    if (d > 50) [[unlikely]] {
        if (small.m <= 0) return big;
        return fx_make(big.m + 1, big.e, true);
    }
    std::int64_t sm = small.m >> d;
    sm += (small.m & ((std::int64_t(1) << d) - 1)) != 0;
    std::int64_t m = big.m + sm;
    std::int64_t e = big.e;
    if (m == 0) return {};
    const std::int64_t over = (m > kFxCap) | (m < -kFxCap);
    m = over ? ((m >> 1) + (m & 1)) : m;
    e += over;
    return {m, e};
}

inline Fx fx_make128(__int128 p, std::int64_t e, bool round_up) {
    if (p == 0) return {};
    unsigned __int128 mag = static_cast<unsigned __int128>(p < 0 ? -p : p);
    int bits = mag >> 64 ? 128 - __builtin_clzll(static_cast<std::uint64_t>(mag >> 64))
                         : 64 - __builtin_clzll(static_cast<std::uint64_t>(mag));
    if (bits <= 47) return {static_cast<std::int64_t>(p), e};
    int s = bits - 47;
    __int128 q = p >> s;
    if (round_up && (p & ((static_cast<__int128>(1) << s) - 1))) ++q;
    return {static_cast<std::int64_t>(q), e + s};
}

inline Fx fx_mul(const Fx& a, const Fx& b, bool round_up) {
    if (a.m == 0 || b.m == 0) return {};
    return fx_make128(static_cast<__int128>(a.m) * b.m, a.e + b.e, round_up);
}

// Exact three-way comparison of fx values.
inline int fx_cmp(const Fx& a, const Fx& b) {
    int sa = a.m < 0 ? -1 : a.m > 0 ? 1 : 0;
    int sb = b.m < 0 ? -1 : b.m > 0 ? 1 : 0;
    if (sa != sb) return sa < sb ? -1 : 1;
    if (sa == 0) return 0;
    std::int64_t d = a.e - b.e;
    if (d >= 48) return sa;    // |a| > |b|
    if (d <= -48) return -sa;  // |a| < |b|
    __int128 ma = a.m, mb = b.m;
    if (d >= 0) ma <<= d;
    else mb <<= -d;
    return ma < mb ? -1 : ma > mb ? 1 : 0;
}

// Interval polynomial, lower and upper coefficient bounds side by side.
struct FxPoly {
    std::vector<Fx> lo, hi;

    std::size_t size() const { return lo.size(); }
};

FxPoly fx_from_exact(const std::vector<mpz_class>& c) {
    FxPoly out;
    out.lo.resize(c.size());
    out.hi.resize(c.size());
    mpz_class t;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const mpz_class& x = c[i];
        if (x == 0) continue;
        std::size_t bits = mpz_sizeinbase(x.get_mpz_t(), 2);
        if (bits <= 47) {
            std::int64_t v = mpz_get_si(x.get_mpz_t());
            out.lo[i] = {v, 0};
            out.hi[i] = {v, 0};
        } else {
            std::int64_t s = static_cast<std::int64_t>(bits) - 47;
            mpz_fdiv_q_2exp(t.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
            out.lo[i] = {mpz_get_si(t.get_mpz_t()), s};
            mpz_cdiv_q_2exp(t.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
            out.hi[i] = {mpz_get_si(t.get_mpz_t()), s};
        }
    }
    return out;
}

// Sign of a coefficient interval: -1/0/+1 certified, 2 when it straddles 0.
inline int fx_sign(const Fx& lo, const Fx& hi) {
    if (lo.m > 0) return 1;
    if (hi.m < 0) return -1;
    if (lo.m == 0 && hi.m == 0) return 0;
    return 2;
}

void fx_taylor_shift_1(FxPoly& c) {
    // Passes are fused in pairs: with a_j the post-pass-k value and
    // b_j = a_j + b_{j+1} the post-pass-(k+1) value, one sweep carries four
    // short dependency chains (a/b times lo/hi) instead of one long one.
    const std::size_t d = c.size() - 1;
    Fx* lo = c.lo.data();
    Fx* hi = c.hi.data();
    std::size_t k = 0;
    for (; k + 1 < d; k += 2) {
        Fx alo = lo[d], ahi = hi[d];
        Fx blo = lo[d], bhi = hi[d];
        for (std::size_t j = d - 1; j + 1 > k; --j) {
            Fx nalo = fx_add_down(lo[j], alo);
            Fx nahi = fx_add_up(hi[j], ahi);
            if (j > k) {
                blo = fx_add_down(nalo, blo);
                bhi = fx_add_up(nahi, bhi);
                lo[j] = blo;
                hi[j] = bhi;
            } else {
                lo[j] = nalo;
                hi[j] = nahi;
            }
            alo = nalo;
            ahi = nahi;
        }
    }
    for (; k < d; ++k)
        for (std::size_t j = d - 1; j + 1 > k; --j) {
            lo[j] = fx_add_down(lo[j], lo[j + 1]);
            hi[j] = fx_add_up(hi[j], hi[j + 1]);
        }
}

FxPoly fx_left_half(const FxPoly& c) {
    FxPoly q(c);
    const std::int64_t d = static_cast<std::int64_t>(c.size()) - 1;
    for (std::size_t i = 0; i < q.size(); ++i) {
        std::int64_t bump = d - static_cast<std::int64_t>(i);
        if (q.lo[i].m != 0) q.lo[i].e += bump;
        if (q.hi[i].m != 0) q.hi[i].e += bump;
    }
    return q;
}

struct VarBounds {
    int min = 0;
    int max = 0;
};

VarBounds fx_variation_bounds(const FxPoly& c) {
    VarBounds vb;
    int prev = 0;
    constexpr int kNone = -1000000;  // "no assignment ends with this sign yet"
    int dp_plus = kNone, dp_minus = kNone;
    for (std::size_t i = 0; i < c.size(); ++i) {
        int s = fx_sign(c.lo[i], c.hi[i]);
        if (s == 0) continue;
        if (s == 1 || s == -1) {
            if (prev != 0 && s != prev) ++vb.min;
            prev = s;
        }
        // max-variation DP over assignments; an uncertain entry may act as
        // +, - or vanish.
        int np, nm;
        if (s == 1) {
            np = std::max(dp_plus == kNone ? 0 : dp_plus,
                          dp_minus == kNone ? 0 : dp_minus + 1);
            nm = kNone;
        } else if (s == -1) {
            nm = std::max(dp_minus == kNone ? 0 : dp_minus,
                          dp_plus == kNone ? 0 : dp_plus + 1);
            np = kNone;
        } else {
            np = std::max(dp_plus == kNone ? 0 : dp_plus,
                          dp_minus == kNone ? 0 : dp_minus + 1);
            nm = std::max(dp_minus == kNone ? 0 : dp_minus,
                          dp_plus == kNone ? 0 : dp_plus + 1);
        }
        dp_plus = np;
        dp_minus = nm;
    }
    vb.max = std::max({dp_plus == kNone ? 0 : dp_plus, dp_minus == kNone ? 0 : dp_minus, 0});
    return vb;
}

// Interval value of c(1/2): -1/0/+1 certified, 2 unknown.
int fx_sign_at_half(const FxPoly& c) {
    Fx alo{}, ahi{};
    for (std::size_t i = c.size(); i-- > 0;) {
        if (alo.m != 0) alo.e -= 1;
        if (ahi.m != 0) ahi.e -= 1;
        alo = fx_add_down(alo, c.lo[i]);
        ahi = fx_add_up(ahi, c.hi[i]);
    }
    return fx_sign(alo, ahi);
}

VarBounds fx_variation_bound_01(const FxPoly& c) {
    FxPoly w;
    w.lo.assign(c.lo.rbegin(), c.lo.rend());
    w.hi.assign(c.hi.rbegin(), c.hi.rend());
    fx_taylor_shift_1(w);
    return fx_variation_bounds(w);
}

// One fixed multiplier of known sign (an exact dyadic rounded outward).
struct FxConst {
    Fx lo, hi;
    int sign = 0;

    static FxConst from_dyadic(const Dyadic& v) {
        FxConst out;
        out.sign = v.sign();
        if (out.sign == 0) return out;
        std::size_t bits = mpz_sizeinbase(v.mant.get_mpz_t(), 2);
        if (bits <= 47) {
            std::int64_t m = mpz_get_si(v.mant.get_mpz_t());
            out.lo = {m, v.exp};
            out.hi = {m, v.exp};
        } else {
            std::int64_t s = static_cast<std::int64_t>(bits) - 47;
            mpz_class t;
            mpz_fdiv_q_2exp(t.get_mpz_t(), v.mant.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
            out.lo = {mpz_get_si(t.get_mpz_t()), v.exp + s};
            mpz_cdiv_q_2exp(t.get_mpz_t(), v.mant.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
            out.hi = {mpz_get_si(t.get_mpz_t()), v.exp + s};
        }
        return out;
    }
};

// [xlo, xhi] * B for positive B: 2 directed multiplications.
inline void fx_mul_const_pos(Fx& xlo, Fx& xhi, const FxConst& b) {
    Fx nlo = xlo.m >= 0 ? fx_mul(xlo, b.lo, false) : fx_mul(xlo, b.hi, false);
    Fx nhi = xhi.m >= 0 ? fx_mul(xhi, b.hi, true) : fx_mul(xhi, b.lo, true);
    xlo = nlo;
    xhi = nhi;
}

inline void fx_mul_const(Fx& xlo, Fx& xhi, const FxConst& b) {
    if (b.sign == 0) {
        xlo = {};
        xhi = {};
        return;
    }
    if (b.sign > 0) {
        fx_mul_const_pos(xlo, xhi, b);
        return;
    }
    FxConst neg{{-b.hi.m, b.hi.e}, {-b.lo.m, b.lo.e}, 1};
    fx_mul_const_pos(xlo, xhi, neg);
    Fx nlo{-xhi.m, xhi.e}, nhi{-xlo.m, xlo.e};
    if (nlo.m == 0) nlo = {};
    if (nhi.m == 0) nhi = {};
    xlo = nlo;
    xhi = nhi;
}

// Affine composition p(a + w x) evaluated directly in interval floats
// (positive scaling is irrelevant to signs, so no denominator clearing).
FxPoly fx_compose_affine(const std::vector<mpz_class>& c, const Dyadic& a, const Dyadic& w) {
    FxConst A = FxConst::from_dyadic(a);
    FxConst W = FxConst::from_dyadic(w);
    std::size_t d = c.size() - 1;
    while (d > 0 && c[d] == 0) --d;
    FxPoly q;
    q.lo.reserve(d + 1);
    q.hi.reserve(d + 1);
    mpz_class t;
    for (std::size_t i = d + 1; i-- > 0;) {
        if (!q.lo.empty()) {
            // q <- q * (A + W x) + c_i
            std::size_t top = q.lo.size();
            q.lo.push_back(q.lo[top - 1]);
            q.hi.push_back(q.hi[top - 1]);
            fx_mul_const(q.lo[top], q.hi[top], W);
            for (std::size_t k = top - 1; k >= 1; --k) {
                Fx wl = q.lo[k - 1], wh = q.hi[k - 1];
                fx_mul_const(wl, wh, W);
                fx_mul_const(q.lo[k], q.hi[k], A);
                q.lo[k] = fx_add_down(q.lo[k], wl);
                q.hi[k] = fx_add_up(q.hi[k], wh);
            }
            fx_mul_const(q.lo[0], q.hi[0], A);
        } else {
            q.lo.emplace_back();
            q.hi.emplace_back();
        }
        // constant term += c_i (exactly representable or outward rounded)
        const mpz_class& x = c[i];
        if (x != 0) {
            std::size_t bits = mpz_sizeinbase(x.get_mpz_t(), 2);
            Fx cl, ch;
            if (bits <= 47) {
                std::int64_t v = mpz_get_si(x.get_mpz_t());
                cl = {v, 0};
                ch = {v, 0};
            } else {
                std::int64_t s = static_cast<std::int64_t>(bits) - 47;
                mpz_fdiv_q_2exp(t.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
                cl = {mpz_get_si(t.get_mpz_t()), s};
                mpz_cdiv_q_2exp(t.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
                ch = {mpz_get_si(t.get_mpz_t()), s};
            }
            q.lo[0] = fx_add_down(q.lo[0], cl);
            q.hi[0] = fx_add_up(q.hi[0], ch);
        }
    }
    return q;
}

enum class NodeCall { count0, count1, split, ambiguous };

}  // namespace

namespace detail {
// Filter effectiveness counters (test/benchmark introspection only).
thread_local FilterStats g_filter_stats;
FilterStats filter_stats() { return g_filter_stats; }
void reset_filter_stats() { g_filter_stats = {}; }
}  // namespace detail

namespace {

NodeCall classify(const VarBounds& vb) {
    if (vb.max == 0) return NodeCall::count0;
    if (vb.min == 1 && vb.max == 1) return NodeCall::count1;
    if (vb.min >= 2) return NodeCall::split;
    return NodeCall::ambiguous;
}

// Subdivision steps recorded between exact snapshots.
enum : std::uint8_t { kStepLeft = 0, kStepRight = 1, kStepCompose = 2 };

struct ComposeCtx {
    bool active = false;
    Dyadic a, w;
};

struct FilterNode {
    FxPoly fx;
    std::shared_ptr<const std::vector<mpz_class>> base;  // exact snapshot
    std::vector<std::uint8_t> steps;                     // path from base
    Dyadic t0, t1;
    long depth = 0;
};

std::vector<mpz_class> replay_steps(const std::vector<mpz_class>& base,
                                    const std::vector<std::uint8_t>& steps,
                                    const ComposeCtx& ctx) {
    std::vector<mpz_class> c = base;
    for (std::uint8_t s : steps) {
        if (s == kStepCompose) {
            c = detail::compose_affine(c, ctx.a, ctx.w);
        } else {
            c = left_half(c);
            if (s == kStepRight) {
                detail::taylor_shift_1(c);
                strip_pow2_content(c);
            }
        }
    }
    return c;
}

void materialize(FilterNode& node, const ComposeCtx& ctx) {
    if (node.steps.empty()) return;
    auto fresh = std::make_shared<std::vector<mpz_class>>(replay_steps(*node.base, node.steps, ctx));
    node.base = std::move(fresh);
    node.steps.clear();
    node.fx = fx_from_exact(*node.base);
}

// Counts (and optionally collects isolating intervals for) the distinct
// roots in the open unit interval.  Requires a squarefree polynomial whose
// values at 0 and 1 are nonzero after the entry deflations below.
std::uint64_t vca_open_01_filtered(std::vector<mpz_class> c, const ComposeCtx& compose,
                                   const IsolationSink& sink) {
    std::uint64_t count = 0;
    FilterNode root;
    if (compose.active) {
        root.fx = fx_compose_affine(c, compose.a, compose.w);
        root.base = std::make_shared<const std::vector<mpz_class>>(std::move(c));
        root.steps = {kStepCompose};
    } else {
        trim_leading_zeros(c);
        if (c.size() > 1 && c[0] == 0) c.erase(c.begin());
        trim_leading_zeros(c);
        if (c.size() > 1 && eval_at_one(c) == 0) c = divide_by_x_minus_1(c);
        if (c.size() <= 1) return 0;
        strip_pow2_content(c);
        root.fx = fx_from_exact(c);
        root.base = std::make_shared<const std::vector<mpz_class>>(std::move(c));
    }
    root.t0 = Dyadic(0);
    root.t1 = Dyadic(1);

    const long cap = depth_cap_for(*root.base) + 8;
    std::vector<FilterNode> stack;
    stack.push_back(std::move(root));

    while (!stack.empty()) {
        FilterNode node = std::move(stack.back());
        stack.pop_back();
        if (node.fx.size() <= 1) continue;
        ++detail::g_filter_stats.nodes;
        NodeCall call = classify(fx_variation_bound_01(node.fx));
        if (call == NodeCall::ambiguous && !node.steps.empty()) {
            // Refresh the intervals from an exact snapshot and retry.
            ++detail::g_filter_stats.refreshes;
            materialize(node, compose);
            call = classify(fx_variation_bound_01(node.fx));
        }
        if (call == NodeCall::ambiguous) {
            ++detail::g_filter_stats.exact_var_tests;
            int v = variation_bound_01(*node.base);
            call = v == 0 ? NodeCall::count0 : v == 1 ? NodeCall::count1 : NodeCall::split;
        }
        if (call == NodeCall::count0) continue;
        if (call == NodeCall::count1) {
            ++count;
            sink.isolating(node.t0, node.t1);
            continue;
        }
        if (node.depth >= cap)
            throw InternalError("Descartes bisection exceeded its depth cap");

        Dyadic mid = Dyadic::midpoint(node.t0, node.t1);
        int half_sign = fx_sign_at_half(node.fx);
        if (half_sign == 0 || half_sign == 2) {
            materialize(node, compose);
            if (eval_at_half_scaled(*node.base) == 0) {
                ++count;
                sink.exact_root(mid);
                std::vector<mpz_class> l = left_half(*node.base);
                l = divide_by_x_minus_1(l);
                std::vector<mpz_class> r = l;
                detail::taylor_shift_1(r);
                strip_pow2_content(r);
                strip_pow2_content(l);
                FilterNode left{fx_from_exact(l),
                                std::make_shared<const std::vector<mpz_class>>(std::move(l)),
                                {},
                                node.t0,
                                mid,
                                node.depth + 1};
                FilterNode right{fx_from_exact(r),
                                 std::make_shared<const std::vector<mpz_class>>(std::move(r)),
                                 {},
                                 mid,
                                 node.t1,
                                 node.depth + 1};
                stack.push_back(std::move(right));
                stack.push_back(std::move(left));
                continue;
            }
        }
        FxPoly lfx = fx_left_half(node.fx);
        node.fx.lo.clear();
        node.fx.hi.clear();
        FxPoly rfx = lfx;
        fx_taylor_shift_1(rfx);
        FilterNode left{std::move(lfx), node.base, node.steps, node.t0, mid, node.depth + 1};
        left.steps.push_back(kStepLeft);
        FilterNode right{std::move(rfx), node.base, std::move(node.steps), mid, node.t1,
                         node.depth + 1};
        right.steps.push_back(kStepRight);
        stack.push_back(std::move(right));
        stack.push_back(std::move(left));
    }
    return count;
}

// Reference path: the same recursion entirely in exact integers.
std::uint64_t vca_open_01_exact(std::vector<mpz_class> c, const IsolationSink& sink) {
    trim_leading_zeros(c);
    if (c.size() > 1 && c[0] == 0) c.erase(c.begin());
    trim_leading_zeros(c);
    if (c.size() > 1 && eval_at_one(c) == 0) c = divide_by_x_minus_1(c);
    if (c.size() <= 1) return 0;
    strip_pow2_content(c);

    const long cap = depth_cap_for(c);
    struct Node {
        std::vector<mpz_class> poly;
        Dyadic t0, t1;
        long depth;
    };
    std::vector<Node> stack;
    stack.push_back({std::move(c), Dyadic(0), Dyadic(1), 0});
    std::uint64_t count = 0;

    while (!stack.empty()) {
        Node node = std::move(stack.back());
        stack.pop_back();
        int v = variation_bound_01(node.poly);
        if (v == 0) continue;
        if (v == 1) {
            ++count;
            sink.isolating(node.t0, node.t1);
            continue;
        }
        if (node.depth >= cap)
            throw InternalError("Descartes bisection exceeded its depth cap");
        Dyadic mid = Dyadic::midpoint(node.t0, node.t1);
        std::vector<mpz_class> l = left_half(node.poly);
        node.poly.clear();
        if (eval_at_one(l) == 0) {
            ++count;
            sink.exact_root(mid);
            l = divide_by_x_minus_1(l);
        }
        std::vector<mpz_class> r = l;
        detail::taylor_shift_1(r);
        strip_pow2_content(r);
        stack.push_back({std::move(r), mid, node.t1, node.depth + 1});
        stack.push_back({std::move(l), node.t0, mid, node.depth + 1});
    }
    return count;
}

std::vector<mpz_class> negate_argument(const std::vector<mpz_class>& c) {
    std::vector<mpz_class> q(c);
    for (std::size_t i = 1; i < q.size(); i += 2) q[i] = -q[i];
    return q;
}

std::vector<mpz_class> reversed(const std::vector<mpz_class>& c) {
    return std::vector<mpz_class>(c.rbegin(), c.rend());
}

bool contains_half_open(const QueryRange& r, const Dyadic& x) {
    if (r.lo && !(*r.lo < x)) return false;
    if (r.hi && x > *r.hi) return false;
    return true;
}

}  // namespace

namespace detail {

int sign_variations(const std::vector<mpz_class>& c) {
    int vars = 0, prev = 0;
    for (const auto& x : c) {
        int s = sgn(x);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++vars;
        prev = s;
    }
    return vars;
}

void taylor_shift_1(std::vector<mpz_class>& c) {
    const std::size_t d = c.size() - 1;
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t j = d - 1; j + 1 > k; --j)
            mpz_add(c[j].get_mpz_t(), c[j].get_mpz_t(), c[j + 1].get_mpz_t());
}

std::uint64_t count_open_01(std::vector<mpz_class> c) {
    return vca_open_01_exact(std::move(c), {});
}

std::vector<mpz_class> compose_affine(const std::vector<mpz_class>& c, const Dyadic& a,
                                      const Dyadic& w) {
    // q(x) = p(a + w x) with denominators cleared:  a + w x = (A + W x) / 2^v.
    long v = std::max({-a.exp, -w.exp, 0L});
    mpz_class A = a.mant, W = w.mant;
    mpz_mul_2exp(A.get_mpz_t(), A.get_mpz_t(), static_cast<mp_bitcnt_t>(v + a.exp));
    mpz_mul_2exp(W.get_mpz_t(), W.get_mpz_t(), static_cast<mp_bitcnt_t>(v + w.exp));

    std::size_t d = c.size() - 1;
    while (d > 0 && c[d] == 0) --d;
    std::vector<mpz_class> q;
    q.reserve(d + 1);
    mpz_class t;
    for (std::size_t i = d + 1; i-- > 0;) {
        // q <- q * (A + W x) + c_i * 2^{v (d - i)}
        if (!q.empty()) {
            q.push_back(q.back() * W);
            for (std::size_t k = q.size() - 2; k >= 1; --k) {
                q[k] *= A;
                mpz_addmul(q[k].get_mpz_t(), q[k - 1].get_mpz_t(), W.get_mpz_t());
            }
            q[0] *= A;
        } else {
            q.emplace_back(0);
        }
        t = c[i];
        mpz_mul_2exp(t.get_mpz_t(), t.get_mpz_t(),
                     static_cast<mp_bitcnt_t>(v) * static_cast<mp_bitcnt_t>(d - i));
        q[0] += t;
    }
    strip_pow2_content(q);
    return q;
}

Dyadic root_magnitude_bound(const std::vector<mpz_class>& c) {
    std::size_t d = c.size() - 1;
    while (d > 0 && c[d] == 0) --d;
    assert(c[d] != 0);
    long lead_bits = static_cast<long>(mpz_sizeinbase(c[d].get_mpz_t(), 2));
    long delta = 0;
    for (std::size_t i = 0; i < d; ++i) {
        if (c[i] == 0) continue;
        long b = static_cast<long>(mpz_sizeinbase(c[i].get_mpz_t(), 2)) - lead_bits;
        delta = std::max(delta, b);
    }
    return Dyadic(mpz_class(1), delta + 2);  // 2^{delta+2} > 1 + max |c_i| / |c_d|
}

}  // namespace detail

RootCounter::RootCounter(const IntPolynomial& p) {
    auto dp = p.effective_degree();
    if (!dp) throw ZeroPolynomialError("root counting of the zero polynomial");
    std::size_t lo = 0;
    while (p.coeffs[lo] == 0) {
        ++lo;
        ++mult_zero_;
    }
    std::vector<mpz_class> c(p.coeffs.begin() + static_cast<long>(lo),
                             p.coeffs.begin() + static_cast<long>(*dp) + 1);
    while (c.size() > 1 && eval_at_one(c) == 0) {
        c = divide_by_x_minus_1(c);
        ++mult_one_;
    }
    while (c.size() > 1 && eval_at_minus_one(c) == 0) {
        c = divide_by_x_plus_1(c);
        ++mult_minus_one_;
    }
    bool residual_multiple = false;
    IntPolynomial residual(std::move(c), 0);
    if (residual.formal_degree() >= 2 && !squarefree_certificate(residual)) {
        IntPolynomial g = poly_gcd(residual, derivative(residual));
        if (*g.effective_degree() >= 1) {
            residual_multiple = true;
            residual = squarefree_part(residual);
        }
    }
    had_multiplicity_ =
        residual_multiple || mult_zero_ >= 2 || mult_one_ >= 2 || mult_minus_one_ >= 2;
    core_ = primitive_part(residual);
    core_.scale_exp = 0;
}

std::uint64_t RootCounter::count(const QueryRange& range) const {
    if (range.lo && range.hi && !(*range.lo < *range.hi)) return 0;
    std::uint64_t total = 0;
    if (mult_zero_ > 0 && contains_half_open(range, Dyadic(0))) ++total;
    if (mult_one_ > 0 && contains_half_open(range, Dyadic(1))) ++total;
    if (mult_minus_one_ > 0 && contains_half_open(range, Dyadic(-1))) ++total;
    if (core_.formal_degree() == 0) return total;

    if (!range.lo && !range.hi) {
        const auto& c = core_.coeffs;
        total += vca_open_01_filtered(c, {}, {});              // (0, 1)
        total += vca_open_01_filtered(reversed(c), {}, {});    // (1, inf)
        std::vector<mpz_class> neg = negate_argument(c);
        total += vca_open_01_filtered(reversed(neg), {}, {});  // (-inf, -1)
        total += vca_open_01_filtered(std::move(neg), {}, {}); // (-1, 0)
        return total;
    }

    Dyadic bound = detail::root_magnitude_bound(core_.coeffs);
    Dyadic a = range.lo ? *range.lo : -bound;
    Dyadic b = range.hi ? *range.hi : bound;
    if (!(a < b)) return total;
    if (range.hi && sign_at(core_, b) == 0) ++total;  // root exactly at b is included
    ComposeCtx ctx{true, a, b - a};
    total += vca_open_01_filtered(core_.coeffs, ctx, {});
    return total;
}

std::uint64_t RootCounter::count_real_line() const { return count(QueryRange::full_line()); }

std::uint64_t RootCounter::count_left_closed(const Dyadic& lo, const Dyadic& hi) const {
    if (!(lo < hi)) return 0;
    std::uint64_t total = count(QueryRange{lo, hi});
    auto is_root = [&](const Dyadic& x) {
        if (x.is_zero()) return mult_zero_ > 0;
        if (x == Dyadic(1)) return mult_one_ > 0;
        if (x == Dyadic(-1)) return mult_minus_one_ > 0;
        return core_.formal_degree() > 0 && sign_at(core_, x) == 0;
    };
    if (is_root(lo)) ++total;
    if (is_root(hi)) --total;
    return total;
}

// Bisect an isolating interval for the unique core root strictly inside it
// down to the requested width.  Endpoints may coincide with *other* roots of
// the core, in which case a one-sided count query decides the half.
void RootCounter::refine_interval(DyadicInterval& iv, const Dyadic& width) const {
    if (iv.lo == iv.hi) return;
    int sl = sign_at(core_, iv.lo);
    int sh = sign_at(core_, iv.hi);
    while (width < iv.width()) {
        Dyadic mid = iv.midpoint();
        int sm = sign_at(core_, mid);
        if (sm == 0) {
            iv.lo = iv.hi = mid;
            return;
        }
        bool root_left;
        if (sl != 0) root_left = (sm != sl);
        else if (sh != 0) root_left = (sm == sh);
        else root_left = count(QueryRange{iv.lo, mid}) == 1;
        if (root_left) {
            iv.hi = mid;
            sh = sm;
        } else {
            iv.lo = mid;
            sl = sm;
        }
    }
}

RootReport RootCounter::isolate(const QueryRange& range, const Dyadic& width) const {
    RootReport report;
    report.had_multiplicity = had_multiplicity_;
    if (range.lo && range.hi && !(*range.lo < *range.hi)) return report;
    auto add_point = [&](const Dyadic& x) { report.intervals.push_back({x, x}); };
    if (mult_zero_ > 0 && contains_half_open(range, Dyadic(0))) add_point(Dyadic(0));
    if (mult_one_ > 0 && contains_half_open(range, Dyadic(1))) add_point(Dyadic(1));
    if (mult_minus_one_ > 0 && contains_half_open(range, Dyadic(-1))) add_point(Dyadic(-1));

    if (core_.formal_degree() > 0) {
        Dyadic bound = detail::root_magnitude_bound(core_.coeffs);
        Dyadic a = range.lo ? *range.lo : -bound;
        Dyadic b = range.hi ? *range.hi : bound;
        if (a < b) {
            if (range.hi && sign_at(core_, b) == 0) add_point(b);
            std::vector<DyadicInterval> open;
            IsolationSink sink{&open, a, b - a};
            ComposeCtx ctx{true, a, b - a};
            vca_open_01_filtered(core_.coeffs, ctx, sink);
            for (auto& iv : open) refine_interval(iv, width);
            report.intervals.insert(report.intervals.end(), open.begin(), open.end());
        }
    }

    std::sort(report.intervals.begin(), report.intervals.end(),
              [](const DyadicInterval& x, const DyadicInterval& y) {
                  return x.lo < y.lo || (x.lo == y.lo && x.hi < y.hi);
              });
    // Shrink neighbors that touch at an endpoint (roots are distinct, so a
    // few extra bisections always separate them).
    for (std::size_t i = 0; i + 1 < report.intervals.size(); ++i) {
        DyadicInterval& x = report.intervals[i];
        DyadicInterval& y = report.intervals[i + 1];
        while (!(x.hi < y.lo)) {
            if (!(x.lo == x.hi)) {
                refine_interval(x, x.width() * Dyadic(mpz_class(1), -1));
            } else if (!(y.lo == y.hi)) {
                refine_interval(y, y.width() * Dyadic(mpz_class(1), -1));
            } else {
                throw InternalError("coincident isolating intervals");
            }
        }
    }
    return report;
}

std::uint64_t count_roots_descartes(const IntPolynomial& p, const QueryRange& range) {
    return RootCounter(p).count(range);
}

RootReport isolate_roots(const IntPolynomial& p, const QueryRange& range, const Dyadic& width) {
    if (!(Dyadic(0) < width)) throw DomainError("isolate_roots: width must be positive");
    return RootCounter(p).isolate(range, width);
}

}  // namespace kacroots
