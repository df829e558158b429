#pragma once
#include <cstdint>
#include <string>

#include "kacroots/poly.hpp"

namespace kacroots {

enum class Dist { gaussian, rademacher, uniform_pm1, three_point };

const char* dist_name(Dist d);
Dist dist_from_name(const std::string& name);  // throws std::invalid_argument

/// Coefficient distribution + degree + master seed.  Fully determines the
/// infinite sequence of sample polynomials: sample i is a pure function of
/// (spec, i), independent of thread scheduling.
struct EnsembleSpec {
    Dist dist = Dist::gaussian;
    int degree = 1;  // n >= 1; the polynomial has n+1 coefficients
    std::uint64_t master_seed = 0;
};

/// Draw sample polynomial `index` from the ensemble.
///
/// Seeding is counter-based: the per-sample generator state is
///     SplitMix64 seeded with  master_seed XOR (0x9E3779B97F4A7C15 * (index+1)),
/// whose first four outputs initialize a xoshiro256++ stream; coefficient
/// draws then proceed in coefficient order 0..n.  Both algorithms are fixed
/// forever by the golden-value test.
///
///   gaussian     Box-Muller on 53-bit uniforms, values rounded to integer
///                multiples of 2^-53 (scale_exp = 53)
///   rademacher   +-1 fair coin (scale_exp = 0)
///   uniform_pm1  dyadic uniform k * 2^-53, k in [-2^53, 2^53)  (scale_exp = 53)
///   three_point  uniform on {-1, 0, 1} (scale_exp = 0)
IntPolynomial sample(const EnsembleSpec& spec, std::uint64_t index);

/// P_m: keep coefficients 0..m, drop the rest; scale_exp preserved.
/// Throws BadDegreeError unless 0 <= m <= formal_degree(p).
IntPolynomial truncate(const IntPolynomial& p, long m);

namespace rng {

/// SplitMix64 (Steele, Lea, Flood).  Used only to derive stream states.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next();
};

/// xoshiro256++ (Blackman, Vigna).
struct Xoshiro256pp {
    std::uint64_t s[4];
    explicit Xoshiro256pp(std::uint64_t seed);
    std::uint64_t next();
    /// Uniform in [0, 1), 53 random bits.
    double next_unit();
    /// Uniform in {0, ..., bound-1} by rejection (no modulo bias).
    std::uint64_t next_below(std::uint64_t bound);
};

std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index);

}  // namespace rng

}  // namespace kacroots
