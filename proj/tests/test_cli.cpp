#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    std::string cmd = std::string(KACROOTS_CLI_PATH) + " " + args + " 2>/tmp/kacroots_cli_err.txt";
    CliResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.out.append(buf.data(), got);
    int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string stderr_text() { return read_file("/tmp/kacroots_cli_err.txt"); }

}  // namespace

TEST_CASE("expect --asymptotic prints the closed expansion") {
    CliResult r = run_cli("expect --degree 100 --asymptotic");
    CHECK(r.exit_code == 0);
    CHECK(std::stod(r.out) == doctest::Approx(3.5638444).epsilon(1e-6));
}

TEST_CASE("density --integrate reproduces the near-zero window value") {
    CliResult r = run_cli("density --degree 200 --from -0.5 --to 0.5 --integrate --tol 1e-8");
    CHECK(r.exit_code == 0);
    CHECK(std::fabs(std::stod(r.out) - std::log(3.0) / std::numbers::pi) <= 1e-6);
}

TEST_CASE("density table mode emits the requested grid") {
    CliResult r = run_cli("density --degree 10 --from 0 --to 1 --points 5");
    CHECK(r.exit_code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,density");
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 5);
}

TEST_CASE("simulate on a rademacher cubic") {
    CliResult r = run_cli("simulate --degree 3 --samples 1 --dist rademacher --seed 0 --out -");
    CHECK(r.exit_code == 0);
    std::istringstream in(r.out);
    std::string header, row;
    std::getline(in, header);
    CHECK(header ==
          "index,degree,dist,roots_total,roots_in_query,min_abs_deriv,min_gap,had_multiplicity");
    std::getline(in, row);
    // one CSV row: a +-1 cubic has 1 or 3 real roots
    std::istringstream fields(row);
    std::string tok;
    std::getline(fields, tok, ',');
    CHECK(tok == "0");
    std::getline(fields, tok, ',');
    CHECK(tok == "3");
    std::getline(fields, tok, ',');
    CHECK(tok == "rademacher");
    std::getline(fields, tok, ',');
    CHECK((tok == "1" || tok == "3"));

    CliResult window = run_cli(
        "simulate --degree 3 --samples 4 --dist rademacher --seed 0 --interval -0.5,0.5 --out -");
    CHECK(window.exit_code == 0);
    std::istringstream win(window.out);
    std::getline(win, header);
    while (std::getline(win, row)) {
        if (row.empty()) continue;
        std::istringstream f2(row);
        for (int k = 0; k < 5; ++k) std::getline(f2, tok, ',');
        CHECK(tok == "0");  // roots_in_query on (-1/2, 1/2)
    }
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("expect").exit_code == 2);                    // missing --degree
    CHECK(run_cli("expect --degree 10 --bogus").exit_code == 2);
    CHECK(run_cli("").exit_code == 2);                          // missing subcommand
    CHECK(run_cli("simulate --degree 3 --samples 1 --dist nosuch --seed 0 --out -").exit_code ==
          1);  // runtime validation
}

TEST_CASE("unreachable tolerance exits 1 and reports the honest estimate") {
    CliResult r = run_cli("density --degree 50 --from 0 --to 1 --integrate --tol 1e-30");
    CHECK(r.exit_code == 1);
    CHECK(stderr_text().find("err_est") != std::string::npos);
}

TEST_CASE("simulate summary round-trips and is thread-count independent") {
    std::string base = "simulate --degree 25 --samples 40 --dist gaussian --seed 9 ";
    CliResult a = run_cli(base + "--threads 1 --out - --summary /tmp/kacroots_sum1.json");
    CliResult b = run_cli(base + "--threads 8 --out - --summary /tmp/kacroots_sum8.json");
    CHECK(a.exit_code == 0);
    CHECK(b.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(read_file("/tmp/kacroots_sum1.json") == read_file("/tmp/kacroots_sum8.json"));
    CHECK(read_file("/tmp/kacroots_sum1.json").find("\"mean\"") != std::string::npos);
}

TEST_CASE("compare writes CSV and a deterministic SVG chart") {
    std::string args =
        "compare --degrees 10:20:10 --samples 30 --seed 3 --out /tmp/kacroots_cmp.csv "
        "--svg /tmp/kacroots_cmp.svg";
    CHECK(run_cli(args).exit_code == 0);
    std::string csv = read_file("/tmp/kacroots_cmp.csv");
    CHECK(csv.rfind("degree,mean_gaussian,mean_rademacher,gap\n", 0) == 0);
    std::string svg = read_file("/tmp/kacroots_cmp.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("gaussian") != std::string::npos);
    CHECK(svg.find("rademacher") != std::string::npos);
    int polylines = 0;
    for (std::size_t at = 0; (at = svg.find("<polyline", at)) != std::string::npos; ++at)
        ++polylines;
    CHECK(polylines == 2);

    CHECK(run_cli(args).exit_code == 0);
    CHECK(read_file("/tmp/kacroots_cmp.svg") == svg);  // byte-identical rerun

    // single-degree chart: degenerate one-point polylines, no crash
    CHECK(run_cli("compare --degrees 10:10:1 --samples 10 --seed 3 --out - --svg "
                  "/tmp/kacroots_one.svg")
              .exit_code == 0);
    CHECK(read_file("/tmp/kacroots_one.svg").find("<polyline") != std::string::npos);
}

TEST_CASE("doubles subcommand emits records and violation summary") {
    CliResult r = run_cli(
        "doubles --degree 100 --samples 20 --dist rademacher --seed 2 --out /tmp/kacroots_dbl.csv "
        "--thresholds 6,8");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"violations\"") != std::string::npos);
    CHECK(read_file("/tmp/kacroots_dbl.csv").find("min_abs_deriv") != std::string::npos);
}

TEST_CASE("smallball subcommand prints the tail table") {
    CliResult r = run_cli(
        "smallball --degree 30 --dist rademacher --x 0.875 --gammas 1e-1,1e-2 --samples 50 "
        "--seed 4");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("gamma,count,probability\n", 0) == 0);
}

TEST_CASE("truncate subcommand reports the paired comparison") {
    CliResult r = run_cli(
        "truncate --degree 120 --keep 60 --interval 0.75,0.8125 --samples 40 --dist gaussian "
        "--seed 6");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"identical_fraction\"") != std::string::npos);
    CliResult coupled = run_cli(
        "truncate --degree 2000 --r 0.1875 --interval 0.75,0.8125 --samples 1 --dist gaussian "
        "--seed 6");
    CHECK(coupled.exit_code == 0);
    CHECK(coupled.out.find("\"kept_degree\": 1460") != std::string::npos);
}

TEST_CASE("edge subcommand reports the mean against the bound") {
    CliResult r = run_cli("edge --degree 60 --dist gaussian --cap 10 --samples 40 --seed 8");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"edge_bound\"") != std::string::npos);
}

TEST_CASE("JSON config supplies defaults and explicit flags win") {
    {
        std::ofstream cfg("/tmp/kacroots_cfg.json");
        cfg << "{\"degree\": 100, \"asymptotic\": true}\n";
    }
    CliResult fromcfg = run_cli("expect --config /tmp/kacroots_cfg.json");
    CHECK(fromcfg.exit_code == 0);
    CHECK(std::stod(fromcfg.out) == doctest::Approx(3.5638444).epsilon(1e-6));

    CliResult overridden = run_cli("expect --config /tmp/kacroots_cfg.json --degree 10000");
    CHECK(overridden.exit_code == 0);
    CHECK(std::stod(overridden.out) == doctest::Approx(6.4892843).epsilon(1e-6));
}
