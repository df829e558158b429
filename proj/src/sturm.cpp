#include <cassert>

#include "kacroots/errors.hpp"
#include "kacroots/root_count.hpp"

namespace kacroots {

SturmChain sturm_chain(const IntPolynomial& p) {
    auto dp = p.effective_degree();
    if (!dp) throw ZeroPolynomialError("sturm_chain of the zero polynomial");
    SturmChain chain;
    chain.polys.push_back(primitive_part(p));
    if (*dp == 0) return chain;
    chain.polys.push_back(primitive_part(derivative(p)));
    while (true) {
        const IntPolynomial& a = chain.polys[chain.polys.size() - 2];
        const IntPolynomial& b = chain.polys.back();
        if (*b.effective_degree() == 0) break;
        IntPolynomial r = pseudo_remainder_even(a, b);
        if (r.is_zero()) break;
        r = primitive_part(r);
        for (auto& c : r.coeffs) c = -c;
        chain.polys.push_back(std::move(r));
    }
    return chain;
}

int sturm_variations(const SturmChain& chain, const mpq_class& at) {
    int vars = 0, prev = 0;
    for (const auto& q : chain.polys) {
        int s = sgn(eval_exact(q, at));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++vars;
        prev = s;
    }
    return vars;
}

int sturm_variations_at_infinity(const SturmChain& chain, bool positive) {
    int vars = 0, prev = 0;
    for (const auto& q : chain.polys) {
        auto d = q.effective_degree();
        assert(d);
        int s = sgn(q.coeffs[*d]);
        if (!positive && *d % 2 == 1) s = -s;
        if (prev != 0 && s != prev) ++vars;
        prev = s;
    }
    return vars;
}

std::uint64_t count_roots(const IntPolynomial& p, const QueryRange& range) {
    auto dp = p.effective_degree();
    if (!dp) throw ZeroPolynomialError("count_roots of the zero polynomial");
    if (*dp == 0) return 0;
    if (range.lo && range.hi && !(*range.lo < *range.hi)) return 0;

    SturmChain chain = sturm_chain(squarefree_part(p));
    int va = range.lo ? sturm_variations(chain, range.lo->to_mpq())
                      : sturm_variations_at_infinity(chain, false);
    int vb = range.hi ? sturm_variations(chain, range.hi->to_mpq())
                      : sturm_variations_at_infinity(chain, true);
    assert(va >= vb);
    return static_cast<std::uint64_t>(va - vb);
}

}  // namespace kacroots
