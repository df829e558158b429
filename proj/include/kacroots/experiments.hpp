#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kacroots/dyadic.hpp"
#include "kacroots/ensembles.hpp"
#include "kacroots/root_count.hpp"

namespace kacroots {

/// Per-polynomial root statistics.  min_abs_deriv and min_gap are taken over
/// the distinct real roots inside the configured bulk window (mathematical
/// scale, i.e. with 2^{-scale_exp} applied) and absent when the window holds
/// no roots (or is disabled).
struct SampleRecord {
    std::uint64_t index = 0;
    int degree = 0;
    Dist dist = Dist::gaussian;
    std::uint64_t roots_total = 0;
    std::uint64_t roots_in_query = 0;
    std::optional<double> min_abs_deriv;
    std::optional<double> min_gap;
    bool had_multiplicity = false;
};

/// Aggregated estimator with a normal-approximation confidence interval.
struct SummaryStats {
    std::uint64_t samples = 0;
    double mean = 0.0;
    double variance = 0.0;      // sample variance (M-1 denominator)
    double ci_halfwidth = 0.0;  // 1.96 * sqrt(variance / samples)
    std::map<std::string, double> extras;
};

/// Bulk window (1 - b0_inv, 1 - b1 ln n / n]; valid only when nonempty.
struct BulkWindow {
    double b0_inv = 0.2;
    double b1 = 4.0;

    bool valid_for(int n) const;
    /// Throws DomainError when the window is empty for n.
    QueryRange range_for(int n) const;
};

/// How many worker threads to use; 0 means "KACROOTS_THREADS env var or 1".
int resolve_threads(int requested);

struct SimulateConfig {
    EnsembleSpec spec;
    std::uint64_t samples = 0;
    std::optional<QueryRange> interval;  // nullopt: full line
    std::optional<BulkWindow> window;    // when set and valid: fill min_abs_deriv/min_gap
    int threads = 0;
};

/// Draw and analyze samples 0..M-1.  Results are a pure function of the
/// config: each index is processed independently and collected by index, so
/// any thread count yields identical output.
std::vector<SampleRecord> run_samples(const SimulateConfig& cfg);

/// Root statistics of one polynomial: full-line count, count on `interval`
/// (full line when absent), and — when `window` is given — min |P'| over the
/// window roots (mathematical scale) and the minimal root gap.
SampleRecord analyze_polynomial(const IntPolynomial& p,
                                const std::optional<QueryRange>& interval,
                                const std::optional<QueryRange>& window);

/// Mean/variance/CI of roots_in_query over the records (integer-sum based,
/// hence order- and thread-count-independent).
SummaryStats summarize_counts(const std::vector<SampleRecord>& records);

/// Monte Carlo expectation of the root count on `interval` (full line when
/// nullopt).
SummaryStats run_expectation(const EnsembleSpec& spec, std::uint64_t samples,
                             const std::optional<QueryRange>& interval, int threads = 0);

struct GapRow {
    int degree = 0;
    double mean_gaussian = 0.0;
    double mean_rademacher = 0.0;
    double gap = 0.0;
};

/// Per-degree full-line means for the gaussian and rademacher ensembles and
/// their difference (common master seed: common random numbers).
std::vector<GapRow> run_gap(const std::vector<int>& degrees, std::uint64_t samples,
                            std::uint64_t master_seed, int threads = 0);

/// Mean count on the edge interval [0, 1 - 1/C).  extras report the mirrored
/// interval mean when mirror is set, plus the closed-form edge bound.
SummaryStats run_edge(const EnsembleSpec& spec, std::uint64_t samples, double C,
                      bool mirror = false, int threads = 0);

/// One near-double-root threshold: derivative cut n^-deriv_exponent paired
/// with root-gap cut n^-gap_exponent.
struct DoublesThreshold {
    int deriv_exponent = 8;
    int gap_exponent = 12;
};

struct DoublesResult {
    std::vector<SampleRecord> records;
    /// violations[k] counts samples with min_abs_deriv <= n^-B_k or
    /// min_gap <= n^-G_k (exact comparisons, interval-certified).
    std::vector<std::uint64_t> violations;
    std::vector<DoublesThreshold> thresholds;
};

DoublesResult run_doubles(const EnsembleSpec& spec, std::uint64_t samples,
                          const BulkWindow& window, std::vector<DoublesThreshold> thresholds,
                          int threads = 0);

struct SmallBallRow {
    std::string gamma;        // decimal as given
    std::uint64_t count = 0;  // samples with |P(x)| <= gamma (mathematical scale)
    double probability = 0.0;
};

/// Exact small-ball tail table for |P(x)| at a dyadic point.  gammas are
/// decimal strings compared exactly.  Warns (stderr) when x lies outside the
/// configured bulk window.
std::vector<SmallBallRow> run_smallball(const EnsembleSpec& spec, std::uint64_t samples,
                                        const Dyadic& x, const std::vector<std::string>& gammas,
                                        const BulkWindow& window = {}, int threads = 0);

struct TruncationResult {
    std::uint64_t samples = 0;
    long kept_degree = 0;
    double mean_full = 0.0;       // E N_n J
    double mean_truncated = 0.0;  // E N_m J
    double abs_difference = 0.0;
    double paired_ci_halfwidth = 0.0;  // CI of the per-sample paired difference
    double identical_fraction = 0.0;   // share of samples with equal counts
};

/// Paired root-count comparison between P_n and its truncation P_m on J.
/// Throws BadDegreeError for m >= n.
TruncationResult run_truncation(const EnsembleSpec& spec, std::uint64_t samples, long m,
                                const QueryRange& J, int threads = 0);

/// The lemma's coupling m = ceil(4 B r^{-1} ln n) with B = 9 (the value the
/// truncation argument composes from its near-double-root inputs at C = 2).
long truncation_kept_degree(int n, double r);

/// Sampled-maximum Jensen diagnostic: log(M0 / |P(0)|) / log(R / r) with M0
/// the max of |P| over `grid` points of the circle |z| = R.  Upper-bounds the
/// number of roots in [-r, r] up to grid error.  Throws DomainError if
/// P(0) == 0 or the radii are invalid.
double jensen_bound(const IntPolynomial& p, double r, double R, int grid = 4096);

/// CSV with columns exactly:
///   index,degree,dist,roots_total,roots_in_query,min_abs_deriv,min_gap,had_multiplicity
/// Floats use shortest round-trip form; absent optionals become empty fields.
std::string records_to_csv(const std::vector<SampleRecord>& records);
std::vector<SampleRecord> records_from_csv(const std::string& csv);

/// JSON summary {spec, M, mean, variance, ci_halfwidth, extras}.
std::string summary_to_json(const EnsembleSpec& spec, const SummaryStats& stats);

namespace fastpoly {

/// Compensated (error-free-transformation) Horner evaluation of the unscaled
/// integer part at a double point, plus a validated absolute error bound:
/// |value - exact| <= abs_bound.  Used only as a pre-filter; every borderline
/// decision falls back to exact arithmetic.
struct CompensatedValue {
    double value = 0.0;
    double abs_bound = 0.0;
};

CompensatedValue compensated_horner(const std::vector<double>& coeffs, double x);
std::vector<double> coefficient_doubles(const IntPolynomial& p);

}  // namespace fastpoly

}  // namespace kacroots
