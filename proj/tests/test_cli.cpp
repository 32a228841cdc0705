// black-box checks of the spinlab binary: artifact shapes, exit codes,
// config round-trips, and byte-determinism across runs and worker counts.
// usage: test_cli <path-to-spinlab-binary>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "json.hpp"
#include "spinlab/cli.hpp"

#define REQUIRE_MSG(cond, msg)                                                      \
    do {                                                                            \
        if (!(cond)) {                                                              \
            std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " " << msg    \
                      << "\n";                                                      \
            std::exit(1);                                                           \
        }                                                                           \
    } while (0)

namespace {

std::string g_bin;

struct run_result {
    int code = -1;
    std::string out;
};

run_result run(const std::string& args, const std::string& env = "") {
    std::string cmd = (env.empty() ? "" : "env " + env + " ") + g_bin + " " + args
                      + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE_MSG(p != nullptr, "popen failed for: " << cmd);
    run_result r;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
    int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string line;
    while (std::getline(ss, line)) out.push_back(line);
    return out;
}

std::string tmp_path(const char* stem) {
    return "/tmp/spinlab_cli_" + std::to_string(getpid()) + "_" + stem;
}

void check_envelope_shape() {
    run_result r = run("clifford check --dim 4");
    REQUIRE_MSG(r.code == 0, "clifford check exit " << r.code);
    nlohmann::json env = nlohmann::json::parse(r.out, nullptr, false);
    REQUIRE_MSG(!env.is_discarded(), "clifford check: not JSON");
    for (const char* key : {"version", "config", "wall_time_ms", "checks", "report"})
        REQUIRE_MSG(env.contains(key), "envelope missing " << key);
    REQUIRE_MSG(env["version"] == "1.0.0", "version mismatch");
    REQUIRE_MSG(env["wall_time_ms"] == 0.0, "wall time must be 0 without --timing");
    REQUIRE_MSG(env["config"]["subcommand"] == "clifford check", "config echo subcommand");
    REQUIRE_MSG(env["report"]["relations_ok"] == true, "relations_ok");
    REQUIRE_MSG(env["report"]["N"] == 4, "fiber dimension");
    REQUIRE_MSG(env["report"]["q_exists"] == true, "q_exists at n=4");
    REQUIRE_MSG(!env["checks"].empty(), "checks empty");
    for (const auto& c : env["checks"]) REQUIRE_MSG(c["pass"] == true, "check failed");

    run_result t = run("--timing clifford check --dim 4");
    nlohmann::json envt = nlohmann::json::parse(t.out);
    REQUIRE_MSG(envt["wall_time_ms"].get<double>() > 0.0, "--timing wall time");
}

void check_spectrum_csv() {
    run_result r = run("torus spectrum --basis 1,0,0,1 --spin 1,1 --count 5");
    REQUIRE_MSG(r.code == 0, "spectrum exit " << r.code);
    std::vector<std::string> ls = lines_of(r.out);
    REQUIRE_MSG(ls.size() >= 6, "spectrum rows: " << ls.size());
    REQUIRE_MSG(ls[0] == "index,eigenvalue,multiplicity", "spectrum header: " << ls[0]);
    char want[64];
    std::snprintf(want, sizeof want, "0,%.17g,4", 3.14159265358979323846 * std::sqrt(2.0));
    REQUIRE_MSG(ls[1] == want, "first eigenvalue row '" << ls[1] << "' != '" << want << "'");
    REQUIRE_MSG(ls[2].substr(0, 3) == "1,-", "second row sign: " << ls[2]);
}

void check_constants_csv() {
    run_result r = run("euclid constants --dim 2");
    REQUIRE_MSG(r.code == 0, "constants exit " << r.code);
    std::vector<std::string> ls = lines_of(r.out);
    REQUIRE_MSG(ls.size() == 2, "constants line count");
    REQUIRE_MSG(ls[0] == "n,omega_nm1,omega_n,I,C0", "constants header");
    double n, o1, o2, I, C0;
    REQUIRE_MSG(std::sscanf(ls[1].c_str(), "%lf,%lf,%lf,%lf,%lf", &n, &o1, &o2, &I, &C0) == 5,
                "constants row parse: " << ls[1]);
    const double pi = 3.14159265358979323846;
    REQUIRE_MSG(std::abs(o1 - 2 * pi) < 1e-12, "omega_1");
    REQUIRE_MSG(std::abs(o2 - 4 * pi) < 1e-12, "omega_2");
    REQUIRE_MSG(std::abs(I - pi) < 1e-12, "I at n=2");
    REQUIRE_MSG(std::abs(C0 - pi) < 1e-12, "C0 at n=2");
}

void check_determinism() {
    const std::string args = "torus green --spin 1,1 --x 0.42,0.17 --y 0.05,0.91";
    run_result a = run(args);
    REQUIRE_MSG(a.code == 0, "green exit " << a.code);
    run_result b = run(args);
    run_result c = run(args, "SPINLAB_THREADS=1");
    run_result d = run(args, "SPINLAB_THREADS=5");
    run_result e = run("--threads 3 " + args);
    REQUIRE_MSG(a.out == b.out, "green output differs across runs");
    REQUIRE_MSG(a.out == c.out, "green output differs at SPINLAB_THREADS=1");
    REQUIRE_MSG(a.out == d.out, "green output differs at SPINLAB_THREADS=5");
    REQUIRE_MSG(a.out == e.out, "green output differs with --threads 3");

    // seeded sampling is part of the contract: same seed same bytes, new seed new bytes
    run_result s1 = run("--seed 9 euclid killing --dim 2");
    run_result s2 = run("--seed 9 euclid killing --dim 2");
    run_result s3 = run("--seed 10 euclid killing --dim 2");
    REQUIRE_MSG(s1.out == s2.out, "seeded run differs across repeats");
    REQUIRE_MSG(s1.out != s3.out, "distinct seeds produced identical reports");
}

void check_config_roundtrip() {
    std::string cfg1 = tmp_path("cfg1.json"), cfg2 = tmp_path("cfg2.json");
    {
        std::ofstream f(cfg1);
        f << "{\"subcommand\": \"torus green\", \"options\": {\"spin\": \"1,1\", "
             "\"x\": \"0.37,0.82\", \"y\": \"0.06,0.55\"}, \"seed\": 7}\n";
    }
    run_result a = run("--config " + cfg1);
    REQUIRE_MSG(a.code == 0, "config run exit " << a.code);
    nlohmann::json env = nlohmann::json::parse(a.out);
    REQUIRE_MSG(env["config"]["seed"] == 7, "config seed echo");
    {
        std::ofstream f(cfg2);
        f << env["config"].dump() << "\n";
    }
    run_result b = run("--config " + cfg2);
    REQUIRE_MSG(b.code == 0, "echoed config exit " << b.code);
    REQUIRE_MSG(a.out == b.out, "config echo is not a lossless round-trip");
    std::remove(cfg1.c_str());
    std::remove(cfg2.c_str());
}

void check_config_rejection() {
    std::string bad = tmp_path("bad.json");
    {
        std::ofstream f(bad);
        f << "{\"subcommand\": \"clifford check\", \"options\": {\"dim\": 4}, \"wibble\": 1}\n";
    }
    REQUIRE_MSG(run("--config " + bad).code == 2, "unknown config field accepted");
    {
        std::ofstream f(bad);
        f << "{\"subcommand\": \"clifford check\", \"options\": {\"dim\": 4, \"dimx\": 2}}\n";
    }
    REQUIRE_MSG(run("--config " + bad).code == 2, "unknown option key accepted");
    {
        std::ofstream f(bad);
        f << "{\"options\": {\"dim\": 4}}\n";
    }
    REQUIRE_MSG(run("--config " + bad).code == 2, "missing subcommand accepted");
    {
        std::ofstream f(bad);
        f << "not json\n";
    }
    REQUIRE_MSG(run("--config " + bad).code == 2, "invalid JSON accepted");
    std::remove(bad.c_str());
}

void check_exit_codes() {
    REQUIRE_MSG(run("").code == 2, "no subcommand must be a usage error");
    REQUIRE_MSG(run("clifford check").code == 2, "missing --dim must be a usage error");
    REQUIRE_MSG(run("torus spectrum --spin 2,1").code == 2, "bad spin entry");
    REQUIRE_MSG(run("rp mass --spin sideways").code == 2, "bad rp spin label");
    REQUIRE_MSG(run("suite").code == 2, "suite without --all");
    REQUIRE_MSG(run("--version").code == 0, "--version");
    REQUIRE_MSG(run("--help").code == 0, "--help");

    // domain errors surface with exit 1
    REQUIRE_MSG(run("clifford check --dim 0").code == 1, "dimension_out_of_range");
    REQUIRE_MSG(run("torus green --spin 0,0 --x 0.3,0.1 --y 0,0").code == 1,
                "trivial structure");
    REQUIRE_MSG(run("yamabe --geometry torus --spin 1,1").code == 1,
                "flat torus must refuse a verdict");
}

void check_yamabe_csv() {
    run_result r = run("yamabe --synthetic --nu-pair -1.0 --eps 0.1");
    REQUIRE_MSG(r.code == 0, "synthetic yamabe exit " << r.code);
    std::vector<std::string> ls = lines_of(r.out);
    REQUIRE_MSG(ls.size() == 2, "synthetic yamabe line count");
    REQUIRE_MSG(ls[0] == "eps,numerator,denominator,J,target,strict_below", "yamabe header");
    REQUIRE_MSG(ls[1].substr(ls[1].rfind(',') + 1) == "true", "nu=-1 must be strict_below");

    run_result inc = run("yamabe --synthetic --nu-pair 0.0 --eps 0.1");
    REQUIRE_MSG(inc.code == 0, "inconclusive yamabe exit " << inc.code);
    REQUIRE_MSG(lines_of(inc.out).size() == 1, "inconclusive run must emit only the header");
}

void check_output_path() {
    std::string out = tmp_path("artifact.json");
    run_result r = run("--out " + out + " clifford check --dim 3");
    REQUIRE_MSG(r.code == 0, "--out exit " << r.code);
    REQUIRE_MSG(r.out.empty(), "--out must silence stdout");
    std::ifstream f(out);
    REQUIRE_MSG(f.good(), "--out file missing");
    nlohmann::json env = nlohmann::json::parse(f, nullptr, false);
    REQUIRE_MSG(!env.is_discarded(), "--out artifact not JSON");
    REQUIRE_MSG(env["report"]["n"] == 3, "--out artifact content");
    std::remove(out.c_str());
}

// every spec operation maps to a dispatching subcommand; each entry of the
// dispatch table is exercised once with a cheap invocation
void check_dispatch_coverage() {
    std::vector<std::string> table = spinlab::cli_dispatch_names();
    const char* expected[] = {"clifford check", "euclid killing", "euclid constants",
                              "torus spectrum", "torus green",    "sphere mass",
                              "rp mass",        "mass-endo",      "yamabe",
                              "suite"};
    REQUIRE_MSG(table.size() == 10, "dispatch table size " << table.size());
    for (const char* name : expected)
        REQUIRE_MSG(std::find(table.begin(), table.end(), name) != table.end(),
                    "dispatch table missing '" << name << "'");

    const char* op_to_subcommand[][2] = {
        {"build_rep", "clifford check"},
        {"volume_element", "clifford check"},
        {"build_nu", "clifford check"},
        {"build_quaternionic", "clifford check"},
        {"green_euclidean", "sphere mass"},
        {"killing_spinor", "euclid killing"},
        {"dirac_fd", "euclid killing"},
        {"functional_J", "euclid killing"},
        {"model_constants", "euclid constants"},
        {"torus_spectrum", "torus spectrum"},
        {"torus_green", "torus green"},
        {"torus_green_fd_oracle", "suite"},
        {"green_sphere", "sphere mass"},
        {"green_rp", "rp mass"},
        {"mass_endo_rp", "rp mass"},
        {"extract_mass", "mass-endo"},
        {"conformal_rescale_mass", "mass-endo"},
        {"mass_spectrum", "mass-endo"},
        {"build_test_spinor", "yamabe"},
        {"evaluate_test_functional", "yamabe"},
        {"yamabe_verdict", "yamabe"},
        {"run", "suite"},
    };
    for (const auto& m : op_to_subcommand)
        REQUIRE_MSG(std::find(table.begin(), table.end(), m[1]) != table.end(),
                    "operation '" << m[0] << "' maps to unknown subcommand '" << m[1] << "'");

    const char* smoke[][2] = {
        {"clifford check", "clifford check --dim 2"},
        {"euclid killing", "euclid killing --dim 2 --check-dirac"},
        {"euclid constants", "euclid constants --dim 3"},
        {"torus spectrum", "torus spectrum --spin 1,0 --count 3"},
        {"torus green", "torus green --spin 1,1 --x 0.37,0.82 --y 0.06,0.55"},
        {"sphere mass", "sphere mass --dim 2 --point 0.5,0.2"},
        {"rp mass", "rp mass --spin minus"},
        {"mass-endo", "mass-endo --geometry torus --spin 1,1 --point 0.3,0 --factor 2"},
        {"yamabe", "yamabe --synthetic --nu-pair -0.5 --eps 0.1"},
        {"suite", "suite --only 1"},
    };
    for (const auto& s : smoke) {
        run_result r = run(s[1]);
        REQUIRE_MSG(r.code == 0, "dispatch smoke '" << s[0] << "' exit " << r.code);
        REQUIRE_MSG(!r.out.empty(), "dispatch smoke '" << s[0] << "' emitted nothing");
    }
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: test_cli <path-to-spinlab-binary>\n";
        return 2;
    }
    g_bin = argv[1];

    check_envelope_shape();
    check_spectrum_csv();
    check_constants_csv();
    check_determinism();
    check_config_roundtrip();
    check_config_rejection();
    check_exit_codes();
    check_yamabe_csv();
    check_output_path();
    check_dispatch_coverage();

    std::cout << "[PASS] cli: envelope, CSV shapes, determinism, config round-trip, exit codes, "
                 "dispatch coverage\n";
    return 0;
}
