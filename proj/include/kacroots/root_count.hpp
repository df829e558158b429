#pragma once
#include <cstdint>
#include <vector>

#include "kacroots/dyadic.hpp"
#include "kacroots/poly.hpp"

namespace kacroots {

/// Signed pseudo-remainder sequence with classical Sturm sign semantics:
/// polys[0] is the primitive part of p, polys[1] the primitive part of p',
/// then negated primitive pseudo-remainders (even-power multipliers).
struct SturmChain {
    std::vector<IntPolynomial> polys;
};

SturmChain sturm_chain(const IntPolynomial& p);

/// Sign variations of the chain at a rational point, dropping zeros.
/// Together with the zero-dropping convention this realizes half-open (a,b]
/// counting: variations(a) - variations(b) includes a root exactly at b and
/// excludes one exactly at a.
int sturm_variations(const SturmChain& chain, const mpq_class& at);
int sturm_variations_at_infinity(const SturmChain& chain, bool positive);

/// Exact number of DISTINCT real roots of p in (a,b], Sturm backend.
/// Works on the squarefree part.  Throws ZeroPolynomialError.
std::uint64_t count_roots(const IntPolynomial& p, const QueryRange& range);

/// Same contract, independent Descartes/VCA bisection backend.
std::uint64_t count_roots_descartes(const IntPolynomial& p, const QueryRange& range);

/// Disjoint isolating intervals for the distinct real roots of p in range,
/// each refined to width <= width.
struct RootReport {
    std::vector<DyadicInterval> intervals;  // sorted, pairwise disjoint
    bool had_multiplicity = false;          // gcd(p, p') nonconstant
};

RootReport isolate_roots(const IntPolynomial& p, const QueryRange& range, const Dyadic& width);

/// Prepared counter for asking several range queries about one polynomial.
/// Preparation factors out roots at 0 and +-1 exactly, then establishes a
/// squarefree core (modular certificate with exact-gcd fallback), so that
/// repeated Descartes counts stay cheap even at degree in the thousands.
class RootCounter {
  public:
    explicit RootCounter(const IntPolynomial& p);

    bool had_multiplicity() const { return had_multiplicity_; }
    std::uint64_t count(const QueryRange& range) const;
    std::uint64_t count_real_line() const;
    /// Count on [lo, hi) (closed left, open right), used by edge queries.
    std::uint64_t count_left_closed(const Dyadic& lo, const Dyadic& hi) const;
    RootReport isolate(const QueryRange& range, const Dyadic& width) const;

    const IntPolynomial& squarefree_core() const { return core_; }
    int multiplicity_at_zero() const { return mult_zero_; }
    int multiplicity_at_one() const { return mult_one_; }
    int multiplicity_at_minus_one() const { return mult_minus_one_; }

    /// Bisect an isolating interval (exactly one core root strictly inside)
    /// down to the requested width, with exact sign decisions.
    void refine_interval(DyadicInterval& iv, const Dyadic& width) const;

  private:
    IntPolynomial core_;  // squarefree, nonzero at 0 and +-1
    int mult_zero_ = 0;
    int mult_one_ = 0;
    int mult_minus_one_ = 0;
    bool had_multiplicity_ = false;
};

namespace detail {
/// Filter effectiveness counters (introspection for tests and benchmarks).
struct FilterStats {
    std::uint64_t nodes = 0;
    std::uint64_t refreshes = 0;
    std::uint64_t exact_var_tests = 0;
};
FilterStats filter_stats();
void reset_filter_stats();

/// Strict sign changes in a coefficient sequence, zeros dropped.
int sign_variations(const std::vector<mpz_class>& c);
/// In-place Taylor shift p(x) -> p(x+1).
void taylor_shift_1(std::vector<mpz_class>& c);
/// Number of real roots of c in the open unit interval (0,1), Descartes
/// bisection.  Requires a squarefree polynomial; throws InternalError past
/// the depth cap.
std::uint64_t count_open_01(std::vector<mpz_class> c);
/// Integer-cleared composition q(x) = p(a + w x) (positive scale dropped).
std::vector<mpz_class> compose_affine(const std::vector<mpz_class>& c, const Dyadic& a,
                                      const Dyadic& w);
/// Power-of-two upper bound 2^k > every |real root| of c (Cauchy bound).
Dyadic root_magnitude_bound(const std::vector<mpz_class>& c);
}  // namespace detail

}  // namespace kacroots
