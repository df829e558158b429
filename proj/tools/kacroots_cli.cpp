// Command-line front end: every experiment and formula, CSV/JSON data and
// self-contained SVG charts.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kacroots/ek_density.hpp"
#include "kacroots/ensembles.hpp"
#include "kacroots/errors.hpp"
#include "kacroots/experiments.hpp"
#include "kacroots/svg.hpp"

namespace {

using namespace kacroots;

void write_output(const std::string& path, const std::string& data) {
    if (path == "-") {
        std::cout << data;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << data;
    if (!out) throw std::runtime_error("write failed: " + path);
}

QueryRange parse_interval(const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos)
        throw CLI::ValidationError("--interval", "expected A,B");
    double a = std::stod(text.substr(0, comma));
    double b = std::stod(text.substr(comma + 1));
    if (!(a <= b)) throw CLI::ValidationError("--interval", "expected A <= B");
    return QueryRange::between(a, b);
}

std::vector<int> parse_degree_range(const std::string& text) {
    int lo = 0, hi = 0, step = 0;
    if (std::sscanf(text.c_str(), "%d:%d:%d", &lo, &hi, &step) != 3 || lo < 1 || hi < lo ||
        step < 1)
        throw CLI::ValidationError("--degrees", "expected LO:HI:STEP");
    std::vector<int> out;
    for (int n = lo; n <= hi; n += step) out.push_back(n);
    return out;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == ',') {
            if (i > start) out.push_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::string format_value(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

// Optional JSON config file; its keys mirror the long flag names of the
// invoked subcommand, and explicit flags win on conflict.  Implemented by
// injecting the config pairs right after the subcommand token (every option
// uses take-last policy).
std::vector<std::string> inject_config(std::vector<std::string> args) {
    std::string config_path;
    std::size_t config_at = 0;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[i + 1];
            config_at = i;
            args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
            config_at = i;
            args.erase(args.begin() + static_cast<long>(i));
            break;
        }
    }
    if (config_path.empty()) return args;
    if (config_at == 0 || args.empty())
        throw CLI::ValidationError("--config", "must follow a subcommand");
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot read config " + config_path);
    nlohmann::json j = nlohmann::json::parse(in);
    if (!j.is_object()) throw std::runtime_error("config must be a JSON object");
    std::vector<std::string> injected;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string flag = "--" + it.key();
        if (it.value().is_boolean()) {
            if (it.value().get<bool>()) injected.push_back(flag);
        } else if (it.value().is_string()) {
            injected.push_back(flag);
            injected.push_back(it.value().get<std::string>());
        } else {
            injected.push_back(flag);
            injected.push_back(it.value().dump());
        }
    }
    args.insert(args.begin() + 1, injected.begin(), injected.end());
    return args;
}

int run(std::vector<std::string> args) {
    CLI::App app{"Real-root statistics of random Kac polynomials"};
    app.require_subcommand(1);

    auto* density_cmd = app.add_subcommand("density", "Edelman-Kostlan density values or integral");
    auto* expect_cmd = app.add_subcommand("expect", "expected number of real roots");
    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo per-sample root statistics");
    auto* compare_cmd = app.add_subcommand("compare", "Gaussian vs Bernoulli means over degrees");
    auto* doubles_cmd = app.add_subcommand("doubles", "near-double-root diagnostics");
    auto* smallball_cmd = app.add_subcommand("smallball", "small-ball tail of |P(x)|");
    auto* truncate_cmd = app.add_subcommand("truncate", "root-count transfer under truncation");
    auto* edge_cmd = app.add_subcommand("edge", "edge-of-spectrum counts vs the closed bound");
    for (auto* cmd : app.get_subcommands({}))
        cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    // density
    int d_degree = 1;
    double d_from = 0, d_to = 0, d_tol = 1e-10;
    int d_points = 201;
    bool d_integrate = false;
    density_cmd->add_option("--degree", d_degree)->required();
    density_cmd->add_option("--from", d_from)->required();
    density_cmd->add_option("--to", d_to)->required();
    density_cmd->add_option("--points", d_points);
    density_cmd->add_flag("--integrate", d_integrate);
    density_cmd->add_option("--tol", d_tol);

    // expect
    int e_degree = 1;
    bool e_asymptotic = false;
    double e_tol = 1e-10;
    expect_cmd->add_option("--degree", e_degree)->required();
    expect_cmd->add_flag("--asymptotic", e_asymptotic);
    expect_cmd->add_option("--tol", e_tol);

    // shared monte-carlo flags
    struct McFlags {
        int degree = 1;
        std::uint64_t samples = 0;
        std::string dist = "gaussian";
        std::uint64_t seed = 0;
        int threads = 0;
    };
    auto add_mc_flags = [](CLI::App* cmd, McFlags& f, bool with_dist = true) {
        cmd->add_option("--degree", f.degree)->required();
        cmd->add_option("--samples", f.samples)->required();
        if (with_dist) cmd->add_option("--dist", f.dist)->required();
        cmd->add_option("--seed", f.seed)->required();
        cmd->add_option("--threads", f.threads);
    };

    // simulate
    McFlags s_flags;
    std::string s_interval, s_out, s_summary;
    add_mc_flags(simulate_cmd, s_flags);
    simulate_cmd->add_option("--interval", s_interval);
    simulate_cmd->add_option("--out", s_out)->required();
    simulate_cmd->add_option("--summary", s_summary);

    // compare
    std::string c_degrees, c_out, c_svg;
    std::uint64_t c_samples = 0, c_seed = 0;
    int c_threads = 0;
    compare_cmd->add_option("--degrees", c_degrees)->required();
    compare_cmd->add_option("--samples", c_samples)->required();
    compare_cmd->add_option("--seed", c_seed)->required();
    compare_cmd->add_option("--out", c_out)->required();
    compare_cmd->add_option("--svg", c_svg);
    compare_cmd->add_option("--threads", c_threads);

    // doubles
    McFlags db_flags;
    double db_b0inv = 0.2, db_b1 = 4.0;
    std::string db_out, db_thresholds = "6,8,10";
    add_mc_flags(doubles_cmd, db_flags);
    doubles_cmd->add_option("--b0inv", db_b0inv);
    doubles_cmd->add_option("--b1", db_b1);
    doubles_cmd->add_option("--out", db_out)->required();
    doubles_cmd->add_option("--thresholds", db_thresholds);

    // smallball
    McFlags sb_flags;
    double sb_x = 0.9;
    std::string sb_gammas, sb_out = "-";
    add_mc_flags(smallball_cmd, sb_flags);
    smallball_cmd->add_option("--x", sb_x)->required();
    smallball_cmd->add_option("--gammas", sb_gammas)->required();
    smallball_cmd->add_option("--out", sb_out);

    // truncate
    McFlags t_flags;
    long t_keep = -1;
    double t_r = 0.0;
    std::string t_interval;
    add_mc_flags(truncate_cmd, t_flags);
    truncate_cmd->add_option("--keep", t_keep);
    truncate_cmd->add_option("--r", t_r);
    truncate_cmd->add_option("--interval", t_interval)->required();

    // edge
    McFlags eg_flags;
    double eg_cap = 0.0;
    bool eg_mirror = false;
    add_mc_flags(edge_cmd, eg_flags);
    edge_cmd->add_option("--cap", eg_cap)->required();
    edge_cmd->add_flag("--mirror", eg_mirror);

    try {
        args = inject_config(std::move(args));
        std::vector<const char*> argv;
        argv.push_back("kacroots");
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    if (density_cmd->parsed()) {
        if (d_integrate) {
            QuadResult r = expected_roots({d_degree, d_from, d_to, d_tol});
            std::cout << format_value(r.value) << "\n";
        } else {
            if (d_points < 1) throw DomainError("--points must be >= 1");
            std::string out = "t,density\n";
            for (int k = 0; k < d_points; ++k) {
                double t = d_points == 1
                               ? d_from
                               : d_from + (d_to - d_from) * static_cast<double>(k) /
                                              static_cast<double>(d_points - 1);
                out += format_value(t);
                out += ',';
                out += format_value(density(d_degree, t));
                out += '\n';
            }
            std::cout << out;
        }
        return 0;
    }

    if (expect_cmd->parsed()) {
        if (e_asymptotic) {
            std::cout << format_value(asymptotic_expectation(e_degree)) << "\n";
        } else {
            QuadResult r = expected_roots_real_line(e_degree, e_tol);
            std::cout << format_value(r.value) << "\n";
        }
        return 0;
    }

    if (simulate_cmd->parsed()) {
        SimulateConfig cfg;
        cfg.spec = {dist_from_name(s_flags.dist), s_flags.degree, s_flags.seed};
        cfg.samples = s_flags.samples;
        if (!s_interval.empty()) cfg.interval = parse_interval(s_interval);
        cfg.window = BulkWindow{};  // diagnostics filled when the window is valid
        cfg.threads = s_flags.threads;
        auto records = run_samples(cfg);
        write_output(s_out, records_to_csv(records));
        if (!s_summary.empty())
            write_output(s_summary, summary_to_json(cfg.spec, summarize_counts(records)));
        return 0;
    }

    if (compare_cmd->parsed()) {
        auto degrees = parse_degree_range(c_degrees);
        auto rows = run_gap(degrees, c_samples, c_seed, c_threads);
        std::string csv = "degree,mean_gaussian,mean_rademacher,gap\n";
        for (const auto& r : rows) {
            csv += std::to_string(r.degree) + "," + format_value(r.mean_gaussian) + "," +
                   format_value(r.mean_rademacher) + "," + format_value(r.gap) + "\n";
        }
        write_output(c_out, csv);
        if (!c_svg.empty()) {
            ChartSeries g{"gaussian", {}}, b{"rademacher", {}};
            for (const auto& r : rows) {
                g.points.push_back({static_cast<double>(r.degree), r.mean_gaussian});
                b.points.push_back({static_cast<double>(r.degree), r.mean_rademacher});
            }
            emit_svg({g, b}, c_svg, "Mean number of real roots", "degree", "mean real roots");
        }
        return 0;
    }

    if (doubles_cmd->parsed()) {
        EnsembleSpec spec{dist_from_name(db_flags.dist), db_flags.degree, db_flags.seed};
        std::vector<DoublesThreshold> thresholds;
        for (const auto& tok : split_list(db_thresholds)) {
            int b = std::stoi(tok);
            thresholds.push_back({b, b + 4});
        }
        auto res = run_doubles(spec, db_flags.samples, BulkWindow{db_b0inv, db_b1}, thresholds,
                               db_flags.threads);
        write_output(db_out, records_to_csv(res.records));
        nlohmann::ordered_json j;
        j["samples"] = db_flags.samples;
        for (std::size_t k = 0; k < res.thresholds.size(); ++k) {
            nlohmann::ordered_json row;
            row["deriv_exponent"] = res.thresholds[k].deriv_exponent;
            row["gap_exponent"] = res.thresholds[k].gap_exponent;
            row["violations"] = res.violations[k];
            j["thresholds"].push_back(row);
        }
        std::cout << j.dump(2) << "\n";
        return 0;
    }

    if (smallball_cmd->parsed()) {
        EnsembleSpec spec{dist_from_name(sb_flags.dist), sb_flags.degree, sb_flags.seed};
        auto rows = run_smallball(spec, sb_flags.samples, Dyadic::from_double(sb_x),
                                  split_list(sb_gammas), BulkWindow{}, sb_flags.threads);
        std::string csv = "gamma,count,probability\n";
        for (const auto& r : rows)
            csv += r.gamma + "," + std::to_string(r.count) + "," + format_value(r.probability) +
                   "\n";
        write_output(sb_out, csv);
        return 0;
    }

    if (truncate_cmd->parsed()) {
        EnsembleSpec spec{dist_from_name(t_flags.dist), t_flags.degree, t_flags.seed};
        long keep = t_keep;
        if (keep < 0) {
            if (!(t_r > 0)) throw DomainError("truncate: give --keep or --r");
            keep = truncation_kept_degree(t_flags.degree, t_r);
        }
        QueryRange J = parse_interval(t_interval);
        auto res = run_truncation(spec, t_flags.samples, keep, J, t_flags.threads);
        nlohmann::ordered_json j;
        j["samples"] = res.samples;
        j["kept_degree"] = res.kept_degree;
        j["mean_full"] = res.mean_full;
        j["mean_truncated"] = res.mean_truncated;
        j["abs_difference"] = res.abs_difference;
        j["paired_ci_halfwidth"] = res.paired_ci_halfwidth;
        j["identical_fraction"] = res.identical_fraction;
        std::cout << j.dump(2) << "\n";
        return 0;
    }

    if (edge_cmd->parsed()) {
        EnsembleSpec spec{dist_from_name(eg_flags.dist), eg_flags.degree, eg_flags.seed};
        SummaryStats s = run_edge(spec, eg_flags.samples, eg_cap, eg_mirror, eg_flags.threads);
        std::cout << summary_to_json(spec, s);
        return 0;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return run(std::move(args));
    } catch (const kacroots::ToleranceNotMetError& e) {
        std::cerr << "error: " << e.what() << " (value=" << format_value(e.value)
                  << ", err_est=" << format_value(e.err_est) << ")\n";
        return 1;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
