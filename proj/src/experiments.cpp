#include "kacroots/experiments.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "kacroots/ek_density.hpp"
#include "kacroots/errors.hpp"

namespace kacroots {

namespace {

constexpr long kIsolationWidthExp = -80;  // default refinement width 2^-80

Dyadic default_isolation_width() { return Dyadic(mpz_class(1), kIsolationWidthExp); }

Dyadic abs_dyadic(const Dyadic& v) { return v.sign() < 0 ? -v : v; }

// Exact comparison of v * 2^{-scale_exp} against a rational threshold.
int cmp_scaled(const Dyadic& v, long scale_exp, const mpq_class& thr) {
    mpq_class lhs = v.to_mpq();
    if (scale_exp > 0)
        mpq_div_2exp(lhs.get_mpq_t(), lhs.get_mpq_t(), static_cast<mp_bitcnt_t>(scale_exp));
    else if (scale_exp < 0)
        mpq_mul_2exp(lhs.get_mpq_t(), lhs.get_mpq_t(), static_cast<mp_bitcnt_t>(-scale_exp));
    return cmp(lhs, thr);
}

double scaled_to_double(const Dyadic& v, long scale_exp) {
    mpq_class q = v.to_mpq();
    if (scale_exp > 0)
        mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(scale_exp));
    else if (scale_exp < 0)
        mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-scale_exp));
    return mpq_get_d(q.get_mpq_t());
}

template <typename Body>
void parallel_for(std::uint64_t count, int threads, const Body& body) {
    if (threads <= 1 || count <= 1) {
        for (std::uint64_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        constexpr std::uint64_t chunk = 8;
        while (true) {
            std::uint64_t begin = next.fetch_add(chunk);
            if (begin >= count) return;
            std::uint64_t end = std::min(begin + chunk, count);
            try {
                for (std::uint64_t i = begin; i < end; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

struct Diagnostics {
    std::vector<DyadicInterval> intervals;  // refined isolating intervals in the window
    std::vector<Dyadic> deriv_at_mid;       // |P'| at midpoints, integer scale
    std::optional<double> min_abs_deriv;    // mathematical scale
    std::optional<double> min_gap;
};

// Integer upper bound on |P''| over the interval: sum |c''_i| * 2^{r i} with
// 2^r >= max(|lo|, |hi|, 1).  Stays valid as the interval shrinks.
mpz_class curvature_bound(const IntPolynomial& ddp, const DyadicInterval& iv) {
    long r = 0;
    for (const Dyadic* e : {&iv.lo, &iv.hi}) {
        if (e->is_zero()) continue;
        long bits = static_cast<long>(mpz_sizeinbase(e->mant.get_mpz_t(), 2)) + e->exp;
        r = std::max(r, bits);
    }
    mpz_class bound(0), t;
    for (std::size_t i = 0; i < ddp.coeffs.size(); ++i) {
        t = abs(ddp.coeffs[i]);
        mpz_mul_2exp(t.get_mpz_t(), t.get_mpz_t(),
                     static_cast<mp_bitcnt_t>(r) * static_cast<mp_bitcnt_t>(i));
        bound += t;
    }
    return bound;
}

// Isolates the window roots and evaluates |P'| at interval midpoints with an
// enforced relative accuracy: refine until max|P''| * width <= 2^-20 * |P'|,
// which pins the reported value to ~1e-6 of |P'(root)|.
Diagnostics window_diagnostics(const IntPolynomial& p, const RootCounter& counter,
                               const QueryRange& window) {
    Diagnostics diag;
    RootReport report = counter.isolate(window, default_isolation_width());
    diag.intervals = std::move(report.intervals);
    if (diag.intervals.empty()) return diag;

    IntPolynomial dp = derivative(p);
    IntPolynomial ddp = derivative(dp);

    double best = std::numeric_limits<double>::infinity();
    for (auto& iv : diag.intervals) {
        const mpz_class curvature = curvature_bound(ddp, iv);
        Dyadic v;
        while (true) {
            v = abs_dyadic(eval_dyadic(dp, iv.midpoint()));
            if (v.is_zero()) break;
            Dyadic w = iv.width();
            if (w.is_zero()) break;
            Dyadic slop(curvature * w.mant, w.exp);
            if (!(v < Dyadic(slop.mant, slop.exp + 20))) break;  // slop <= v * 2^-20
            if (w.exp < -300) break;
            counter.refine_interval(iv, Dyadic(w.mant, w.exp - 1));
        }
        diag.deriv_at_mid.push_back(v);
        best = std::min(best, scaled_to_double(v, p.scale_exp));
    }
    diag.min_abs_deriv = best;

    if (diag.intervals.size() >= 2) {
        double min_gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < diag.intervals.size(); ++i) {
            Dyadic d = diag.intervals[i + 1].midpoint() - diag.intervals[i].midpoint();
            min_gap = std::min(min_gap, d.to_double());
        }
        diag.min_gap = min_gap;
    }
    return diag;
}

mpq_class power_threshold(int n, int exponent) {  // n^-exponent
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(n),
                  static_cast<unsigned long>(exponent));
    return mpq_class(mpz_class(1), den);
}

// Exact decimal string -> rational (mantissa / 10^k with optional exponent).
mpq_class parse_decimal(const std::string& text) {
    std::size_t pos = 0;
    bool neg = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) neg = text[pos++] == '-';
    std::string digits;
    long frac_digits = 0;
    bool seen_dot = false, seen_digit = false;
    for (; pos < text.size(); ++pos) {
        char ch = text[pos];
        if (ch == '.') {
            if (seen_dot) throw std::invalid_argument("bad decimal: " + text);
            seen_dot = true;
        } else if (ch >= '0' && ch <= '9') {
            digits.push_back(ch);
            seen_digit = true;
            if (seen_dot) ++frac_digits;
        } else {
            break;
        }
    }
    long exp10 = 0;
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
        std::string tail = text.substr(pos + 1);
        std::size_t used = 0;
        exp10 = std::stol(tail, &used);
        if (used != tail.size()) throw std::invalid_argument("bad decimal: " + text);
        pos = text.size();
    }
    if (!seen_digit || pos != text.size()) throw std::invalid_argument("bad decimal: " + text);
    mpz_class num(digits.empty() ? "0" : digits);
    if (neg) num = -num;
    long net = exp10 - frac_digits;
    mpq_class q(num);
    mpz_class pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(net < 0 ? -net : net));
    if (net < 0) q /= mpq_class(pow10);
    else q *= mpq_class(pow10);
    q.canonicalize();
    return q;
}

struct CountMoments {
    unsigned __int128 s1 = 0;
    unsigned __int128 s2 = 0;
    std::uint64_t samples = 0;

    void add(std::uint64_t c) {
        s1 += c;
        s2 += static_cast<unsigned __int128>(c) * c;
        ++samples;
    }
};

SummaryStats moments_to_stats(const CountMoments& m) {
    SummaryStats s;
    s.samples = m.samples;
    if (m.samples == 0) return s;
    long double s1 = static_cast<long double>(m.s1);
    long double s2 = static_cast<long double>(m.s2);
    long double M = static_cast<long double>(m.samples);
    s.mean = static_cast<double>(s1 / M);
    if (m.samples > 1) {
        long double var = (s2 - s1 * s1 / M) / (M - 1);
        if (var < 0) var = 0;
        s.variance = static_cast<double>(var);
        s.ci_halfwidth = 1.96 * std::sqrt(s.variance / static_cast<double>(m.samples));
    }
    return s;
}

}  // namespace

bool BulkWindow::valid_for(int n) const {
    if (n < 1 || b0_inv <= 0 || b0_inv >= 1 || b1 <= 0) return false;
    double margin = b1 * std::log(static_cast<double>(n)) / static_cast<double>(n);
    return margin > 0 && margin < b0_inv;
}

QueryRange BulkWindow::range_for(int n) const {
    if (!valid_for(n)) throw DomainError("bulk window is empty for this degree");
    double margin = b1 * std::log(static_cast<double>(n)) / static_cast<double>(n);
    return QueryRange::between(1.0 - b0_inv, 1.0 - margin);
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("KACROOTS_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

SampleRecord analyze_polynomial(const IntPolynomial& p,
                                const std::optional<QueryRange>& interval,
                                const std::optional<QueryRange>& window) {
    SampleRecord rec;
    if (p.is_zero()) return rec;  // all-zero draw (possible for three_point only)
    RootCounter counter(p);
    rec.had_multiplicity = counter.had_multiplicity();
    rec.roots_total = counter.count_real_line();
    rec.roots_in_query = interval ? counter.count(*interval) : rec.roots_total;
    if (window) {
        Diagnostics diag = window_diagnostics(p, counter, *window);
        rec.min_abs_deriv = diag.min_abs_deriv;
        rec.min_gap = diag.min_gap;
    }
    return rec;
}

std::vector<SampleRecord> run_samples(const SimulateConfig& cfg) {
    const int threads = resolve_threads(cfg.threads);
    std::vector<SampleRecord> records(cfg.samples);
    std::optional<QueryRange> window_range;
    if (cfg.window && cfg.window->valid_for(cfg.spec.degree))
        window_range = cfg.window->range_for(cfg.spec.degree);

    parallel_for(cfg.samples, threads, [&](std::uint64_t i) {
        SampleRecord rec = analyze_polynomial(sample(cfg.spec, i), cfg.interval, window_range);
        rec.index = i;
        rec.degree = cfg.spec.degree;
        rec.dist = cfg.spec.dist;
        records[i] = std::move(rec);
    });
    return records;
}

SummaryStats summarize_counts(const std::vector<SampleRecord>& records) {
    CountMoments m;
    std::uint64_t mult = 0;
    for (const auto& r : records) {
        m.add(r.roots_in_query);
        if (r.had_multiplicity) ++mult;
    }
    SummaryStats s = moments_to_stats(m);
    s.extras["had_multiplicity_count"] = static_cast<double>(mult);
    return s;
}

SummaryStats run_expectation(const EnsembleSpec& spec, std::uint64_t samples,
                             const std::optional<QueryRange>& interval, int threads) {
    SimulateConfig cfg;
    cfg.spec = spec;
    cfg.samples = samples;
    cfg.interval = interval;
    cfg.threads = threads;
    return summarize_counts(run_samples(cfg));
}

std::vector<GapRow> run_gap(const std::vector<int>& degrees, std::uint64_t samples,
                            std::uint64_t master_seed, int threads) {
    if (degrees.empty()) throw std::invalid_argument("run_gap: degrees must be nonempty");
    std::vector<GapRow> rows;
    rows.reserve(degrees.size());
    for (int n : degrees) {
        GapRow row;
        row.degree = n;
        row.mean_gaussian =
            run_expectation({Dist::gaussian, n, master_seed}, samples, std::nullopt, threads).mean;
        row.mean_rademacher =
            run_expectation({Dist::rademacher, n, master_seed}, samples, std::nullopt, threads)
                .mean;
        row.gap = row.mean_gaussian - row.mean_rademacher;
        rows.push_back(row);
    }
    return rows;
}

SummaryStats run_edge(const EnsembleSpec& spec, std::uint64_t samples, double C, bool mirror,
                      int threads) {
    if (!(C > 1.0)) throw DomainError("run_edge: C must be > 1");
    const Dyadic b = Dyadic::from_double(1.0 - 1.0 / C);
    const int th = resolve_threads(threads);
    std::vector<std::uint64_t> counts(samples, 0), mirrored(samples, 0);
    parallel_for(samples, th, [&](std::uint64_t i) {
        IntPolynomial p = sample(spec, i);
        if (p.is_zero()) return;
        RootCounter counter(p);
        counts[i] = counter.count_left_closed(Dyadic(0), b);  // [0, 1-1/C)
        if (mirror) mirrored[i] = counter.count(QueryRange{-b, Dyadic(0)});  // (-(1-1/C), 0]
    });
    CountMoments m, mm;
    for (std::uint64_t i = 0; i < samples; ++i) {
        m.add(counts[i]);
        if (mirror) mm.add(mirrored[i]);
    }
    SummaryStats s = moments_to_stats(m);
    s.extras["edge_bound"] = edge_bound(C);
    if (mirror) s.extras["mean_mirrored"] = moments_to_stats(mm).mean;
    return s;
}

DoublesResult run_doubles(const EnsembleSpec& spec, std::uint64_t samples,
                          const BulkWindow& window, std::vector<DoublesThreshold> thresholds,
                          int threads) {
    const int n = spec.degree;
    const QueryRange range = window.range_for(n);
    const int th = resolve_threads(threads);

    DoublesResult result;
    result.thresholds = std::move(thresholds);
    result.records.resize(samples);
    std::vector<std::uint32_t> violation_masks(samples, 0);
    if (result.thresholds.size() > 32) throw std::invalid_argument("too many thresholds");

    std::vector<mpq_class> deriv_thr, gap_thr;
    for (const auto& t : result.thresholds) {
        deriv_thr.push_back(power_threshold(n, t.deriv_exponent));
        gap_thr.push_back(power_threshold(n, t.gap_exponent));
    }

    parallel_for(samples, th, [&](std::uint64_t i) {
        SampleRecord& rec = result.records[i];
        rec.index = i;
        rec.degree = n;
        rec.dist = spec.dist;
        IntPolynomial p = sample(spec, i);
        if (p.is_zero()) return;
        RootCounter counter(p);
        rec.had_multiplicity = counter.had_multiplicity();
        rec.roots_total = counter.count_real_line();
        Diagnostics diag = window_diagnostics(p, counter, range);
        rec.roots_in_query = diag.intervals.size();
        rec.min_abs_deriv = diag.min_abs_deriv;
        rec.min_gap = diag.min_gap;

        // Exact threshold decisions.  |P'| at a midpoint carries slop
        // max|P''| * width; midpoint gaps carry the two half-widths.  Refine
        // until each comparison is certified (ambiguity is a measure-zero
        // borderline, so this terminates immediately in practice).
        IntPolynomial dp = derivative(p);
        IntPolynomial ddp = derivative(dp);

        auto deriv_leq = [&](std::size_t root, const mpq_class& thr) {
            DyadicInterval& iv = diag.intervals[root];
            const mpz_class curvature = curvature_bound(ddp, iv);
            while (true) {
                Dyadic v = abs_dyadic(eval_dyadic(dp, iv.midpoint()));
                if (v.is_zero()) return true;
                Dyadic w = iv.width();
                Dyadic slop(curvature * w.mant, w.exp);
                if (cmp_scaled(v + slop, p.scale_exp, thr) <= 0) return true;
                if (cmp_scaled(v - slop, p.scale_exp, thr) > 0) return false;
                if (w.exp < -300) return cmp_scaled(v, p.scale_exp, thr) <= 0;
                counter.refine_interval(iv, Dyadic(w.mant, w.exp - 1));
            }
        };
        auto gap_leq = [&](std::size_t left, const mpq_class& thr) {
            while (true) {
                DyadicInterval& a = diag.intervals[left];
                DyadicInterval& b = diag.intervals[left + 1];
                Dyadic mid_gap = b.midpoint() - a.midpoint();
                Dyadic slop = Dyadic::midpoint(a.width(), b.width());  // (wa + wb) / 2
                if (cmp_scaled(mid_gap + slop, 0, thr) <= 0) return true;
                if (cmp_scaled(mid_gap - slop, 0, thr) > 0) return false;
                if (a.width().exp < -300 && b.width().exp < -300)
                    return cmp_scaled(mid_gap, 0, thr) <= 0;
                counter.refine_interval(a, Dyadic(a.width().mant, a.width().exp - 1));
                counter.refine_interval(b, Dyadic(b.width().mant, b.width().exp - 1));
            }
        };

        for (std::size_t k = 0; k < result.thresholds.size(); ++k) {
            bool hit = false;
            for (std::size_t r = 0; r < diag.intervals.size() && !hit; ++r)
                hit = deriv_leq(r, deriv_thr[k]);
            for (std::size_t r = 0; r + 1 < diag.intervals.size() && !hit; ++r)
                hit = gap_leq(r, gap_thr[k]);
            if (hit) violation_masks[i] |= (1u << k);
        }
    });

    result.violations.assign(result.thresholds.size(), 0);
    for (std::uint64_t i = 0; i < samples; ++i)
        for (std::size_t k = 0; k < result.thresholds.size(); ++k)
            if (violation_masks[i] & (1u << k)) ++result.violations[k];
    return result;
}

std::vector<SmallBallRow> run_smallball(const EnsembleSpec& spec, std::uint64_t samples,
                                        const Dyadic& x, const std::vector<std::string>& gammas,
                                        const BulkWindow& window, int threads) {
    if (!(Dyadic(0) < x) || !(x < Dyadic(1)))
        throw DomainError("run_smallball: x must lie in (0, 1)");
    if (window.valid_for(spec.degree)) {
        QueryRange r = window.range_for(spec.degree);
        if (!(*r.lo < x) || x > *r.hi)
            std::cerr << "warning: smallball point x=" << x.to_double()
                      << " lies outside the bulk window\n";
    } else {
        std::cerr << "warning: bulk window is empty at degree " << spec.degree << "\n";
    }

    std::vector<mpq_class> thresholds;
    double max_gamma = 0.0;
    for (const auto& g : gammas) {
        thresholds.push_back(parse_decimal(g));
        if (sgn(thresholds.back()) < 0) throw DomainError("run_smallball: gamma must be >= 0");
        max_gamma = std::max(max_gamma, mpq_get_d(thresholds.back().get_mpq_t()));
    }

    const int th = resolve_threads(threads);
    const double xd = x.to_double();
    std::vector<std::uint32_t> masks(samples, 0);
    if (thresholds.size() > 32) throw std::invalid_argument("too many gammas");
    const double gamma_skip = max_gamma * 1.0000001 + 1e-300;

    parallel_for(samples, th, [&](std::uint64_t i) {
        IntPolynomial p = sample(spec, i);
        const double scale = std::ldexp(1.0, -static_cast<int>(p.scale_exp));
        // Certified float pre-filter: skip the exact evaluation whenever
        // |P(x)| provably exceeds every gamma.
        auto fast = fastpoly::compensated_horner(fastpoly::coefficient_doubles(p), xd);
        if ((std::fabs(fast.value) - fast.abs_bound) * scale > gamma_skip) return;
        Dyadic v = abs_dyadic(eval_dyadic(p, x));
        for (std::size_t k = 0; k < thresholds.size(); ++k)
            if (cmp_scaled(v, p.scale_exp, thresholds[k]) <= 0) masks[i] |= (1u << k);
    });

    std::vector<SmallBallRow> rows(gammas.size());
    for (std::size_t k = 0; k < gammas.size(); ++k) rows[k].gamma = gammas[k];
    for (std::uint64_t i = 0; i < samples; ++i)
        for (std::size_t k = 0; k < gammas.size(); ++k)
            if (masks[i] & (1u << k)) ++rows[k].count;
    for (auto& row : rows)
        row.probability = samples ? static_cast<double>(row.count) / static_cast<double>(samples)
                                  : 0.0;
    return rows;
}

long truncation_kept_degree(int n, double r) {
    if (n < 2 || !(r > 0) || !(r < 1)) throw DomainError("truncation coupling needs n >= 2, r in (0,1)");
    constexpr double B = 9.0;  // max(B1, B(2), 8) with B(2) = 5*2/2 + 4
    return static_cast<long>(std::ceil(4.0 * B * std::log(static_cast<double>(n)) / r));
}

TruncationResult run_truncation(const EnsembleSpec& spec, std::uint64_t samples, long m,
                                const QueryRange& J, int threads) {
    if (m > spec.degree) throw BadDegreeError("run_truncation: m must be <= n");
    if (m < 1) throw BadDegreeError("run_truncation: m must be >= 1");
    const int th = resolve_threads(threads);
    std::vector<std::uint64_t> full(samples, 0), trunc(samples, 0);
    parallel_for(samples, th, [&](std::uint64_t i) {
        IntPolynomial p = sample(spec, i);
        if (p.is_zero()) return;
        full[i] = RootCounter(p).count(J);
        IntPolynomial pm = truncate(p, m);
        trunc[i] = pm.is_zero() ? 0 : RootCounter(pm).count(J);
    });

    CountMoments mf, mt;
    __int128 d1 = 0;
    unsigned __int128 d2 = 0;
    std::uint64_t identical = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        mf.add(full[i]);
        mt.add(trunc[i]);
        long long d = static_cast<long long>(full[i]) - static_cast<long long>(trunc[i]);
        d1 += d;
        d2 += static_cast<unsigned __int128>(static_cast<__int128>(d) * d);
        if (d == 0) ++identical;
    }
    TruncationResult res;
    res.samples = samples;
    res.kept_degree = m;
    res.mean_full = moments_to_stats(mf).mean;
    res.mean_truncated = moments_to_stats(mt).mean;
    res.abs_difference = std::fabs(res.mean_full - res.mean_truncated);
    if (samples > 1) {
        long double M = static_cast<long double>(samples);
        long double s1 = static_cast<long double>(d1);
        long double s2 = static_cast<long double>(d2);
        long double var = (s2 - s1 * s1 / M) / (M - 1);
        if (var < 0) var = 0;
        res.paired_ci_halfwidth = 1.96 * std::sqrt(static_cast<double>(var) / static_cast<double>(samples));
    }
    res.identical_fraction =
        samples ? static_cast<double>(identical) / static_cast<double>(samples) : 0.0;
    return res;
}

double jensen_bound(const IntPolynomial& p, double r, double R, int grid) {
    if (!(0.0 < r && r < R && R < 1.0))
        throw DomainError("jensen_bound: need 0 < r < R < 1");
    if (grid < 8) throw DomainError("jensen_bound: grid too coarse");
    if (p.coeffs[0] == 0) throw DomainError("jensen_bound: P(0) == 0");
    std::vector<double> c = fastpoly::coefficient_doubles(p);
    double m0 = 0.0;
    for (int k = 0; k < grid; ++k) {
        double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / grid;
        std::complex<double> z = std::polar(R, theta);
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
        m0 = std::max(m0, std::abs(acc));
    }
    double p0 = std::fabs(c[0]);
    return std::log(m0 / p0) / std::log(R / r);
}

namespace {

std::string double_to_string(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string records_to_csv(const std::vector<SampleRecord>& records) {
    std::string out = "index,degree,dist,roots_total,roots_in_query,min_abs_deriv,min_gap,had_multiplicity\n";
    for (const auto& r : records) {
        out += std::to_string(r.index);
        out += ',';
        out += std::to_string(r.degree);
        out += ',';
        out += dist_name(r.dist);
        out += ',';
        out += std::to_string(r.roots_total);
        out += ',';
        out += std::to_string(r.roots_in_query);
        out += ',';
        if (r.min_abs_deriv) out += double_to_string(*r.min_abs_deriv);
        out += ',';
        if (r.min_gap) out += double_to_string(*r.min_gap);
        out += ',';
        out += r.had_multiplicity ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::vector<SampleRecord> records_from_csv(const std::string& csv) {
    std::vector<SampleRecord> records;
    std::istringstream in(csv);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ',') {
                fields.push_back(line.substr(start, i - start));
                start = i + 1;
            }
        }
        if (fields.size() != 8) throw std::invalid_argument("bad CSV row: " + line);
        SampleRecord r;
        r.index = std::stoull(fields[0]);
        r.degree = std::stoi(fields[1]);
        r.dist = dist_from_name(fields[2]);
        r.roots_total = std::stoull(fields[3]);
        r.roots_in_query = std::stoull(fields[4]);
        auto parse_opt = [](const std::string& s) -> std::optional<double> {
            if (s.empty()) return std::nullopt;
            double v;
            auto res = std::from_chars(s.data(), s.data() + s.size(), v);
            if (res.ec != std::errc()) throw std::invalid_argument("bad float: " + s);
            return v;
        };
        r.min_abs_deriv = parse_opt(fields[5]);
        r.min_gap = parse_opt(fields[6]);
        r.had_multiplicity = fields[7] == "1";
        records.push_back(r);
    }
    return records;
}

std::string summary_to_json(const EnsembleSpec& spec, const SummaryStats& stats) {
    nlohmann::ordered_json j;
    j["spec"] = {{"dist", dist_name(spec.dist)},
                 {"degree", spec.degree},
                 {"master_seed", spec.master_seed}};
    j["M"] = stats.samples;
    j["mean"] = stats.mean;
    j["variance"] = stats.variance;
    j["ci_halfwidth"] = stats.ci_halfwidth;
    j["extras"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : stats.extras) j["extras"][k] = v;
    return j.dump(2) + "\n";
}

namespace fastpoly {

namespace {
inline void two_sum(double a, double b, double& s, double& e) {
    s = a + b;
    double bb = s - a;
    e = (a - (s - bb)) + (b - bb);
}
inline void two_prod(double a, double b, double& p, double& e) {
    p = a * b;
    e = std::fma(a, b, -p);
}
}  // namespace

std::vector<double> coefficient_doubles(const IntPolynomial& p) {
    std::vector<double> c(p.coeffs.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = p.coeffs[i].get_d();
    return c;
}

CompensatedValue compensated_horner(const std::vector<double>& coeffs, double x) {
    const std::size_t n = coeffs.size();
    if (n == 0) return {0.0, 0.0};
    double s = coeffs[n - 1];
    double corr = 0.0;
    double mag = std::fabs(coeffs[n - 1]);  // Horner of |c_i| at |x|
    const double ax = std::fabs(x);
    for (std::size_t i = n - 1; i-- > 0;) {
        double ph, pe, sh, se;
        two_prod(s, x, ph, pe);
        two_sum(ph, coeffs[i], sh, se);
        corr = corr * x + (pe + se);
        s = sh;
        mag = mag * ax + std::fabs(coeffs[i]);
    }
    CompensatedValue out;
    out.value = s + corr;
    // Covers the Horner rounding (~2n u), coefficient rounding from the
    // integer inputs (~n u), and the slack of computing mag itself.
    out.abs_bound = 3.5 * static_cast<double>(n + 2) * 0x1.0p-53 * mag + 1e-300;
    return out;
}

}  // namespace fastpoly

}  // namespace kacroots
