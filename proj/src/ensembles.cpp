#include "kacroots/ensembles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kacroots/errors.hpp"

namespace kacroots {

const char* dist_name(Dist d) {
    switch (d) {
        case Dist::gaussian: return "gaussian";
        case Dist::rademacher: return "rademacher";
        case Dist::uniform_pm1: return "uniform_pm1";
        case Dist::three_point: return "three_point";
    }
    return "?";
}

Dist dist_from_name(const std::string& name) {
    if (name == "gaussian") return Dist::gaussian;
    if (name == "rademacher") return Dist::rademacher;
    if (name == "uniform_pm1") return Dist::uniform_pm1;
    if (name == "three_point") return Dist::three_point;
    throw std::invalid_argument("unknown distribution: " + name);
}

namespace rng {

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed) {
    SplitMix64 sm(seed);
    bool nonzero = false;
    for (auto& w : s) {
        w = sm.next();
        nonzero = nonzero || w != 0;
    }
    if (!nonzero) s[0] = 1;  // the all-zero state is invalid
}

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

std::uint64_t Xoshiro256pp::next() {
    const std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
}

double Xoshiro256pp::next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t Xoshiro256pp::next_below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t(0) - ~std::uint64_t(0) % bound;
    std::uint64_t v;
    do {
        v = next();
    } while (v >= limit);
    return v % bound;
}

std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index) {
    return master_seed ^ (0x9E3779B97F4A7C15ULL * (index + 1));
}

}  // namespace rng

IntPolynomial sample(const EnsembleSpec& spec, std::uint64_t index) {
    if (spec.degree < 1) throw BadDegreeError("EnsembleSpec.degree must be >= 1");
    rng::Xoshiro256pp gen(rng::stream_seed(spec.master_seed, index));
    const std::size_t count = static_cast<std::size_t>(spec.degree) + 1;
    std::vector<mpz_class> coeffs(count);
    long scale_exp = 0;

    switch (spec.dist) {
        case Dist::rademacher:
            for (auto& c : coeffs) c = (gen.next() >> 63) ? 1 : -1;
            break;
        case Dist::three_point:
            for (auto& c : coeffs) c = static_cast<long>(gen.next_below(3)) - 1;
            break;
        case Dist::uniform_pm1:
            scale_exp = 53;
            for (auto& c : coeffs) {
                // 54-bit draw gives a dyadic uniform on [-1, 1).
                std::int64_t k = static_cast<std::int64_t>(gen.next() >> 10) -
                                 (std::int64_t(1) << 53);
                c = static_cast<long>(k);
            }
            break;
        case Dist::gaussian: {
            scale_exp = 53;
            double spare = 0;
            bool have_spare = false;
            for (auto& c : coeffs) {
                double z;
                if (have_spare) {
                    z = spare;
                    have_spare = false;
                } else {
                    // u1 in (0,1] keeps the log finite.
                    double u1 = static_cast<double>((gen.next() >> 11) + 1) * 0x1.0p-53;
                    double u2 = gen.next_unit();
                    double r = std::sqrt(-2.0 * std::log(u1));
                    double a = 2.0 * std::numbers::pi * u2;
                    z = r * std::cos(a);
                    spare = r * std::sin(a);
                    have_spare = true;
                }
                c = static_cast<long>(std::llround(z * 0x1.0p53));
            }
            break;
        }
    }
    return IntPolynomial(std::move(coeffs), scale_exp);
}

IntPolynomial truncate(const IntPolynomial& p, long m) {
    if (m < 0 || static_cast<std::size_t>(m) > p.formal_degree())
        throw BadDegreeError("truncate: m must satisfy 0 <= m <= formal_degree");
    std::vector<mpz_class> c(p.coeffs.begin(), p.coeffs.begin() + m + 1);
    return IntPolynomial(std::move(c), p.scale_exp);
}

}  // namespace kacroots
