#include "spinlab/cli.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spinlab/clifford.hpp"
#include "spinlab/core/rng.hpp"
#include "spinlab/criteria.hpp"
#include "spinlab/euclid.hpp"
#include "spinlab/mass_endo.hpp"
#include "spinlab/report.hpp"
#include "spinlab/sphere_rp.hpp"
#include "spinlab/testspinor.hpp"
#include "spinlab/torus.hpp"

namespace spinlab {
namespace {

using nlohmann::json;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- flag value parsing (all list flags are comma-separated strings) ----

std::vector<double> parse_list(const std::string& s, const char* what) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(s);
    while (std::getline(ss, item, ',')) {
        try {
            size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw usage_error(std::string(what) + ": cannot parse '" + item + "'");
        }
    }
    if (out.empty()) throw usage_error(std::string(what) + ": empty list");
    return out;
}

rvec parse_point(const std::string& s, int n, const char* what) {
    std::vector<double> v = parse_list(s, what);
    if (int(v.size()) != n)
        throw usage_error(std::string(what) + ": expected " + std::to_string(n) + " entries");
    rvec x(n);
    for (int i = 0; i < n; ++i) x(i) = v[i];
    return x;
}

// torus spin flags use 0/1 per axis, 1 meaning a half twist (delta_k = 1/2)
spin_structure parse_torus_spin(const std::string& s, int* n_out) {
    std::vector<double> v = parse_list(s, "--spin");
    rvec d(long(v.size()));
    for (size_t i = 0; i < v.size(); ++i) {
        if (v[i] != 0.0 && v[i] != 1.0)
            throw usage_error("--spin entries must be 0 or 1 (1 = half twist)");
        d(long(i)) = v[i] / 2.0;
    }
    *n_out = int(v.size());
    return make_spin_structure(d);
}

rmat parse_basis(const std::string& s, int n) {
    if (s.empty()) return rmat::Identity(n, n);
    std::vector<double> v = parse_list(s, "--basis");
    if (int(v.size()) != n * n)
        throw usage_error("--basis needs " + std::to_string(n * n) + " row-major entries");
    rmat b(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b(i, j) = v[size_t(i * n + j)];
    return b;
}

int parse_rp_sign(const std::string& s) {
    if (s == "plus") return +1;
    if (s == "minus") return -1;
    throw usage_error("--spin must be 'plus' or 'minus'");
}

// ---- per-subcommand state ----

struct cli_options {
    int dim = 0;
    bool check_dirac = false;
    double quad_tol = 1e-8;
    std::string basis, spin, x, y, point, eps, geometry;
    int count = 8;
    double green_tol = 1e-6;
    double sphere_tol = 1e-4;
    double mass_tol = 1e-4;
    double factor = 1.0;
    bool synthetic = false;
    double nu_pair = -1.0;
    bool all = false;
    int only = 0;
};

struct command_output {
    json report;
    std::vector<check_item> checks;
    std::string csv;
    bool is_csv = false;
    std::string note; // printed to stderr after the artifact is written
};

std::string csv_bool(bool b) { return b ? "true" : "false"; }

// ---- handlers ----

command_output run_clifford_check(const cli_options& o) {
    clifford_rep rep = build_rep(o.dim);
    volume_element_t vol = volume_element(rep);
    int want_sign = (rep.n * (rep.n + 1) / 2) % 2 == 0 ? 1 : -1;
    double rel_defect = clifford_relation_defect(rep);
    double omega_defect =
        (vol.omega * vol.omega - double(vol.square_sign) * cmat::Identity(rep.N, rep.N))
            .cwiseAbs()
            .maxCoeff();

    bool nu_exists = true;
    std::string nu_kind_s = "none";
    double nu_defect = 0;
    try {
        symmetry_automorphism nu = build_nu(rep);
        nu_kind_s = nu.kind == nu_kind::complex_linear ? "complex_linear" : "conjugate_linear";
        nu_defect = nu_anticommutator_defect(rep, nu);
    } catch (const n_unavailable&) {
        nu_exists = false;
    }
    bool q_exists = true;
    double q_defect = 0;
    try {
        quaternionic_structure q = build_quaternionic(rep);
        q_defect = q_commutator_defect(rep, q);
    } catch (const q_unavailable&) {
        q_exists = false;
    }

    command_output out;
    out.checks.push_back({"relations_exact", rel_defect == 0.0, rel_defect, 0.0});
    out.checks.push_back({"omega_square_sign", vol.square_sign == want_sign && omega_defect == 0.0,
                          omega_defect, 0.0});
    if (nu_exists) out.checks.push_back({"nu_defect", nu_defect == 0.0, nu_defect, 0.0});
    if (q_exists) out.checks.push_back({"q_defect", q_defect == 0.0, q_defect, 0.0});

    bool relations_ok = true;
    for (const check_item& c : out.checks) relations_ok = relations_ok && c.pass;
    out.report = {{"n", rep.n},
                  {"N", rep.N},
                  {"relations_ok", relations_ok},
                  {"omega_sign", vol.square_sign},
                  {"nu_exists", nu_exists},
                  {"nu_kind", nu_kind_s},
                  {"q_exists", q_exists}};
    return out;
}

command_output run_euclid_killing(const cli_options& o, unsigned seed) {
    clifford_rep rep = build_rep(o.dim);
    rng rg(seed);
    cvec phi = rg.spinor(rep.N);
    double target = 0.5 * o.dim * std::pow(omega_k(o.dim), 1.0 / o.dim);

    command_output out;
    json rj = {{"n", o.dim}, {"target", target}};
    for (int sign : {+1, -1}) {
        functional_report fr = functional_J(rep, make_killing_field(rep, sign, phi));
        double rel = std::abs(fr.J - sign * target) / target;
        const char* tag = sign > 0 ? "plus" : "minus";
        rj[std::string("J_") + tag] = fr.J;
        rj[std::string("rel_error_") + tag] = rel;
        out.checks.push_back({std::string("functional_") + tag + "_rel", rel <= o.quad_tol, rel,
                              o.quad_tol});
    }
    if (o.check_dirac) {
        double worst = 0;
        for (int sign : {+1, -1}) {
            spinor_field_t fld = make_killing_field(rep, sign, phi);
            for (int it = 0; it < 100; ++it) {
                rvec xp = rg.point(o.dim, -1.5, 1.5);
                cvec want = killing_dirac(rep, sign, phi, xp);
                cvec got = dirac_fd_extrapolated(rep, fld, xp);
                worst = std::max(worst, (got - want).norm() / want.norm());
            }
        }
        rj["fd_points"] = 100;
        rj["fd_worst_rel"] = worst;
        out.checks.push_back({"killing_fd_worst_rel", worst <= 1e-6, worst, 1e-6});
    }
    out.report = rj;
    return out;
}

command_output run_euclid_constants(const cli_options& o) {
    model_constants_t mc = model_constants(o.dim);
    command_output out;
    out.is_csv = true;
    out.csv = "n,omega_nm1,omega_n,I,C0\n"
              + csv_row({std::to_string(mc.n), fmt17(mc.omega_nm1), fmt17(mc.omega_n),
                         fmt17(mc.I), fmt17(mc.C0)});
    return out;
}

command_output run_torus_spectrum(const cli_options& o) {
    int n = 0;
    spin_structure spn = parse_torus_spin(o.spin, &n);
    torus_geometry g = make_torus(parse_basis(o.basis, n));
    if (o.count < 1) throw usage_error("--count must be >= 1");
    std::vector<spectrum_entry> sp = torus_spectrum(g, spn, o.count);
    command_output out;
    out.is_csv = true;
    std::string text = "index,eigenvalue,multiplicity\n";
    for (size_t i = 0; i < sp.size(); ++i)
        text += csv_row(
            {std::to_string(i), fmt17(sp[i].eigenvalue), std::to_string(sp[i].multiplicity)});
    out.csv = text;
    return out;
}

command_output run_torus_green_cmd(const cli_options& o) {
    int n = 0;
    spin_structure spn = parse_torus_spin(o.spin, &n);
    torus_geometry g = make_torus(parse_basis(o.basis, n));
    rvec x = parse_point(o.x, n, "--x");
    rvec y = parse_point(o.y, n, "--y");
    green_result gr = torus_green(g, spn, x, y);
    command_output out;
    out.report = {{"n", n},
                  {"x", json_rvec(x)},
                  {"y", json_rvec(y)},
                  {"G", json_cmat(gr.G)},
                  {"error", gr.error}};
    out.checks.push_back(
        {"extrapolation_error", gr.error <= o.green_tol, gr.error, o.green_tol});
    return out;
}

command_output run_sphere_mass(const cli_options& o) {
    int n = o.dim == 0 ? 3 : o.dim;
    rvec v0;
    if (o.point.empty()) {
        double def[3] = {0.7, -0.4, 0.2};
        v0 = rvec(n);
        for (int i = 0; i < n; ++i) v0(i) = def[i % 3];
    } else {
        v0 = parse_point(o.point, n, "--point");
    }
    stereo_chart ch = make_north_chart(n);
    mass_extraction ex = extract_mass(sphere_flat_evaluator(ch, v0));
    double norm_alpha = ex.alpha.cwiseAbs().maxCoeff();
    command_output out;
    out.report = {{"n", n},
                  {"point", json_rvec(v0)},
                  {"norm_alpha", norm_alpha},
                  {"residual", ex.residual}};
    out.checks.push_back({"norm_alpha", norm_alpha <= o.sphere_tol, norm_alpha, o.sphere_tol});
    return out;
}

command_output run_rp_mass(const cli_options& o) {
    int sign = parse_rp_sign(o.spin);
    rvec v0 = parse_point(o.point.empty() ? "1,0,0" : o.point, 3, "--point");
    rp_geometry geom = make_rp_geometry(0, sign);
    rp_mass_report rp = rp_mass_constant(mass_endo_rp(geom, v0));
    command_output out;
    out.report = {{"sign", sign},
                  {"point", json_rvec(v0)},
                  {"c", rp.c},
                  {"residue", rp.residue},
                  {"tolerance_met", rp.tolerance_met}};
    out.checks.push_back(
        {"off_diag_residue", rp.tolerance_met, rp.residue, 1e-4 * std::abs(rp.c)});
    return out;
}

command_output run_mass_endo(const cli_options& o) {
    mass_extraction ex;
    clifford_rep rep;
    std::string geom_name = o.geometry;
    if (o.geometry == "torus") {
        int n = 0;
        spin_structure spn = parse_torus_spin(o.spin, &n);
        torus_geometry g = make_torus(parse_basis(o.basis, n));
        rvec y = parse_point(o.point, n, "--point");
        flat_chart_evaluator ev;
        ev.n = n;
        ev.rep = g.rep;
        ev.flat_radius = 0.45 * g.basis.jacobiSvd().singularValues().minCoeff();
        ev.eval = [g, spn, y](const rvec& w) { return torus_green_split(g, spn, y + w, y); };
        ex = extract_mass(ev);
        rep = g.rep;
    } else if (o.geometry == "sphere") {
        int n = o.dim == 0 ? 3 : o.dim;
        stereo_chart ch = make_north_chart(n);
        rvec v0 = parse_point(o.point, n, "--point");
        ex = extract_mass(sphere_flat_evaluator(ch, v0));
        rep = ch.rep;
    } else if (o.geometry == "rp3") {
        int sign = parse_rp_sign(o.spin);
        rp_geometry geom = make_rp_geometry(0, sign);
        rvec v0 = parse_point(o.point, 3, "--point");
        ex = mass_endo_rp(geom, v0);
        rep = geom.chart.rep;
    } else {
        throw usage_error("--geometry must be torus, sphere, or rp3");
    }
    if (o.factor <= 0) throw usage_error("--factor must be positive");
    // re-express alpha in a chart whose conformal factor at the point is o.factor
    ex.alpha = conformal_rescale_mass(ex.alpha, o.factor, rep.n);

    json sym = {{"hermitian_defect", ex.hermitian_defect}};
    mass_spectrum_report sp;
    if (rep.n % 4 != 3) {
        symmetry_automorphism nu = build_nu(rep);
        sp = mass_spectrum(ex.alpha, &nu);
        sym["nu_available"] = true;
        sym["nu_anticommutator"] = sp.nu_anticommutator;
        sym["symmetric_spectrum"] = sp.symmetric_spectrum;
    } else {
        sp = mass_spectrum(ex.alpha);
        sym["nu_available"] = false;
    }
    int m = rep.n % 8;
    if (m == 2 || m == 3 || m == 4) {
        quaternionic_structure q = build_quaternionic(rep);
        sym["q_available"] = true;
        sym["q_commutator"] = q_mass_commutator(q, ex.alpha);
    } else {
        sym["q_available"] = false;
    }

    command_output out;
    out.report = {{"geometry", geom_name},
                  {"alpha", json_cmat(ex.alpha)},
                  {"residual", ex.residual},
                  {"spectrum", json(sp.eigenvalues)},
                  {"symmetry_checks", sym}};
    out.checks.push_back({"extraction_residual", ex.residual <= o.mass_tol, ex.residual,
                          o.mass_tol});
    return out;
}

command_output run_yamabe(const cli_options& o) {
    std::vector<double> eps_list;
    if (!o.eps.empty()) {
        eps_list = parse_list(o.eps, "--eps");
        for (double e : eps_list)
            if (e <= 0) throw usage_error("--eps entries must be positive");
    }

    yamabe_verdict_result vr;
    if (o.synthetic) {
        vr = yamabe_verdict_synthetic(3, o.nu_pair, eps_list);
    } else if (o.geometry == "rp3") {
        int sign = parse_rp_sign(o.spin);
        rp_geometry geom = make_rp_geometry(0, sign);
        rvec p = parse_point(o.point.empty() ? "1,0,0" : o.point, 3, "--point");
        vr = yamabe_verdict_rp(geom, p, eps_list);
    } else if (o.geometry == "torus") {
        int n = 0;
        spin_structure spn = parse_torus_spin(o.spin, &n);
        torus_geometry g = make_torus(parse_basis(o.basis, n));
        rvec p;
        if (o.point.empty()) {
            p = rvec::Zero(n);
            p(0) = 0.3;
        } else {
            p = parse_point(o.point, n, "--point");
        }
        vr = yamabe_verdict_torus(g, spn, p); // flat tori throw zero_mass_endomorphism
    } else {
        throw usage_error("--geometry must be rp3 or torus (or pass --synthetic)");
    }

    command_output out;
    out.is_csv = true;
    std::string text = "eps,numerator,denominator,J,target,strict_below\n";
    for (const verdict_row& r : vr.rows)
        text += csv_row({fmt17(r.epsilon), fmt17(r.numerator), fmt17(r.denominator), fmt17(r.J),
                         fmt17(r.target), csv_bool(r.strict_below)});
    out.csv = text;
    if (vr.verdict == verdict_kind::inconclusive)
        out.note = "inconclusive: Re<psi0,psi1> = 0 admits no verdict";
    return out;
}

command_output run_suite(const cli_options& o, unsigned seed) {
    std::vector<criterion_result> results;
    if (o.only != 0) {
        if (o.only < 1 || o.only > criterion_count())
            throw usage_error("--only must be in 1.." + std::to_string(criterion_count()));
        results.push_back(run_criterion(o.only, seed));
    } else if (o.all) {
        results = run_all_criteria(seed);
    } else {
        throw usage_error("suite requires --all (or --only k)");
    }

    command_output out;
    json summary = json::array();
    for (const criterion_result& r : results) {
        summary.push_back({{"index", r.index},
                           {"name", r.name},
                           {"pass", r.pass},
                           {"budget_seconds", r.budget_seconds},
                           {"error", r.error}});
        for (const check_item& c : r.checks) out.checks.push_back(c);
        if (!r.error.empty())
            out.checks.push_back({r.name + ".no_exception", false, 0.0, 0.0});
    }
    out.report = {{"criteria", summary}};
    return out;
}

// ---- config files ----

std::string json_number_to_string(const json& v) {
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
    return fmt17(v.get<double>());
}

std::vector<std::string> args_from_config(const json& cfg) {
    static const char* allowed[] = {"subcommand", "options", "output_path",
                                    "seed",       "threads", "timing"};
    for (const auto& kv : cfg.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || kv.key() == a;
        if (!ok) throw usage_error("config: unknown field '" + kv.key() + "'");
    }
    if (!cfg.contains("subcommand") || !cfg["subcommand"].is_string())
        throw usage_error("config: 'subcommand' (string) is required");

    std::vector<std::string> args;
    if (cfg.contains("seed"))
        args.push_back("--seed=" + json_number_to_string(cfg["seed"]));
    if (cfg.contains("threads"))
        args.push_back("--threads=" + json_number_to_string(cfg["threads"]));
    if (cfg.contains("timing") && cfg["timing"].get<bool>()) args.push_back("--timing");
    if (cfg.contains("output_path")) {
        std::string p = cfg["output_path"].get<std::string>();
        if (!p.empty()) args.push_back("--out=" + p);
    }

    std::string word;
    std::stringstream ss(cfg["subcommand"].get<std::string>());
    while (ss >> word) args.push_back(word);

    if (cfg.contains("options")) {
        if (!cfg["options"].is_object()) throw usage_error("config: 'options' must be an object");
        for (const auto& kv : cfg["options"].items()) {
            const json& v = kv.value();
            if (v.is_boolean()) {
                if (v.get<bool>()) args.push_back("--" + kv.key());
            } else if (v.is_string()) {
                args.push_back("--" + kv.key() + "=" + v.get<std::string>());
            } else if (v.is_number()) {
                args.push_back("--" + kv.key() + "=" + json_number_to_string(v));
            } else {
                throw usage_error("config option '" + kv.key()
                                  + "': use a string, number, or boolean");
            }
        }
    }
    return args;
}

// names, flags, and raw values of explicitly-passed options, for the echo
struct opt_entry {
    CLI::App* owner;
    CLI::Option* opt;
    const char* key;
    bool is_flag;
};

const char* const kDispatchNames[] = {"clifford check", "euclid killing", "euclid constants",
                                      "torus spectrum", "torus green",    "sphere mass",
                                      "rp mass",        "mass-endo",      "yamabe",
                                      "suite"};

} // namespace

std::vector<std::string> cli_dispatch_names() {
    return {std::begin(kDispatchNames), std::end(kDispatchNames)};
}

int cli_main(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        // a config file replaces the whole command line
        for (size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--config" || args[i].rfind("--config=", 0) == 0) {
                std::string path;
                if (args[i] == "--config") {
                    if (args.size() != 2) throw usage_error("--config takes exactly one path");
                    path = args[1];
                } else {
                    if (args.size() != 1) throw usage_error("--config takes exactly one path");
                    path = args[i].substr(9);
                }
                std::ifstream in(path);
                if (!in) throw usage_error("config: cannot open '" + path + "'");
                json cfg = json::parse(in, nullptr, false);
                if (cfg.is_discarded() || !cfg.is_object())
                    throw usage_error("config: invalid JSON in '" + path + "'");
                args = args_from_config(cfg);
                break;
            }
        }

        cli_options o;
        unsigned seed = 12345;
        int threads = 0;
        bool timing = false;
        std::string out_path;
        std::vector<opt_entry> reg;
        auto add_opt = [&reg](CLI::App* sub, CLI::Option* opt, const char* key) {
            reg.push_back({sub, opt, key, false});
            return opt;
        };
        auto add_flag = [&reg](CLI::App* sub, CLI::Option* opt, const char* key) {
            reg.push_back({sub, opt, key, true});
            return opt;
        };

        CLI::App app{"numerical spin geometry workbench"};
        app.name("spinlab");
        app.require_subcommand(1);
        app.set_version_flag("--version", std::string(kArtifactVersion));
        app.add_option("--seed", seed, "seed for randomized sampling (default 12345)");
        app.add_option("--threads", threads, "worker pool size, 0 = logical cores");
        app.add_flag("--timing", timing, "report real wall time in the envelope");
        app.add_option("--out", out_path, "write the artifact to this path instead of stdout");

        CLI::App* clifford = app.add_subcommand("clifford", "Clifford algebra reports");
        clifford->require_subcommand(1);
        CLI::App* ccheck = clifford->add_subcommand("check", "relations and structure maps");
        ccheck->fallthrough();
        add_opt(ccheck, ccheck->add_option("--dim", o.dim, "ambient dimension")->required(),
                "dim");

        CLI::App* euclid = app.add_subcommand("euclid", "Euclidean model spinors");
        euclid->require_subcommand(1);
        CLI::App* ekill = euclid->add_subcommand("killing", "Killing family and functional");
        ekill->fallthrough();
        add_opt(ekill, ekill->add_option("--dim", o.dim, "ambient dimension")->required(),
                "dim");
        add_flag(ekill, ekill->add_flag("--check-dirac", o.check_dirac, "FD Dirac identity"),
                 "check-dirac");
        add_opt(ekill, ekill->add_option("--quad-tol", o.quad_tol, "functional tolerance"),
                "quad-tol");
        CLI::App* econst = euclid->add_subcommand("constants", "model constants CSV");
        econst->fallthrough();
        add_opt(econst, econst->add_option("--dim", o.dim, "ambient dimension")->required(),
                "dim");

        CLI::App* torus = app.add_subcommand("torus", "flat torus spectra and Green kernels");
        torus->require_subcommand(1);
        CLI::App* tspec = torus->add_subcommand("spectrum", "closed-form Dirac spectrum CSV");
        tspec->fallthrough();
        add_opt(tspec, tspec->add_option("--basis", o.basis, "row-major lattice basis"),
                "basis");
        add_opt(tspec, tspec->add_option("--spin", o.spin, "0/1 per axis")->required(), "spin");
        add_opt(tspec, tspec->add_option("--count", o.count, "eigenvalue count"), "count");
        CLI::App* tgreen = torus->add_subcommand("green", "mode-sum Green matrix");
        tgreen->fallthrough();
        add_opt(tgreen, tgreen->add_option("--basis", o.basis, "row-major lattice basis"),
                "basis");
        add_opt(tgreen, tgreen->add_option("--spin", o.spin, "0/1 per axis")->required(),
                "spin");
        add_opt(tgreen, tgreen->add_option("--x", o.x, "first point")->required(), "x");
        add_opt(tgreen, tgreen->add_option("--y", o.y, "second point")->required(), "y");
        add_opt(tgreen, tgreen->add_option("--tol", o.green_tol, "error-estimate tolerance"),
                "tol");

        CLI::App* sphere = app.add_subcommand("sphere", "round sphere checks");
        sphere->require_subcommand(1);
        CLI::App* smass = sphere->add_subcommand("mass", "mass term extraction");
        smass->fallthrough();
        add_opt(smass, smass->add_option("--dim", o.dim, "sphere dimension (default 3)"),
                "dim");
        add_opt(smass, smass->add_option("--point", o.point, "chart base point"), "point");
        add_opt(smass, smass->add_option("--tol", o.sphere_tol, "norm tolerance"), "tol");

        CLI::App* rp = app.add_subcommand("rp", "projective space checks");
        rp->require_subcommand(1);
        CLI::App* rmass = rp->add_subcommand("mass", "mass constant extraction");
        rmass->fallthrough();
        add_opt(rmass, rmass->add_option("--spin", o.spin, "plus | minus")->required(),
                "spin");
        add_opt(rmass, rmass->add_option("--point", o.point, "chart base point"), "point");

        CLI::App* mendo = app.add_subcommand("mass-endo", "mass endomorphism report");
        mendo->fallthrough();
        add_opt(mendo,
                mendo->add_option("--geometry", o.geometry, "torus | sphere | rp3")->required(),
                "geometry");
        add_opt(mendo, mendo->add_option("--basis", o.basis, "torus lattice basis"), "basis");
        add_opt(mendo, mendo->add_option("--spin", o.spin, "torus 0/1 list or rp3 plus/minus"),
                "spin");
        add_opt(mendo, mendo->add_option("--dim", o.dim, "sphere dimension"), "dim");
        add_opt(mendo, mendo->add_option("--point", o.point, "base point")->required(),
                "point");
        add_opt(mendo, mendo->add_option("--tol", o.mass_tol, "residual tolerance"), "tol");
        add_opt(mendo,
                mendo->add_option("--factor", o.factor, "conformal factor of the report chart"),
                "factor");

        CLI::App* yam = app.add_subcommand("yamabe", "strict-inequality verdict CSV");
        yam->fallthrough();
        add_opt(yam, yam->add_option("--geometry", o.geometry, "rp3 | torus"), "geometry");
        add_opt(yam, yam->add_option("--spin", o.spin, "rp3 plus/minus or torus 0/1 list"),
                "spin");
        add_opt(yam, yam->add_option("--basis", o.basis, "torus lattice basis"), "basis");
        add_opt(yam, yam->add_option("--point", o.point, "base point"), "point");
        add_opt(yam, yam->add_option("--eps", o.eps, "epsilon schedule"), "eps");
        add_flag(yam, yam->add_flag("--synthetic", o.synthetic, "flat synthetic harness"),
                 "synthetic");
        add_opt(yam, yam->add_option("--nu-pair", o.nu_pair, "synthetic Re<psi0,psi1>"),
                "nu-pair");

        CLI::App* suite = app.add_subcommand("suite", "acceptance criteria");
        suite->fallthrough();
        add_flag(suite, suite->add_flag("--all", o.all, "run every criterion"), "all");
        add_opt(suite, suite->add_option("--only", o.only, "run one criterion by index"),
                "only");

        try {
            // the vector overload of CLI11::App::parse consumes reversed args
            std::vector<std::string> rev(args.rbegin(), args.rend());
            app.parse(rev);
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e), 0;
        } catch (const CLI::CallForAllHelp& e) {
            return app.exit(e), 0;
        } catch (const CLI::CallForVersion& e) {
            return app.exit(e), 0;
        } catch (const CLI::ParseError& e) {
            app.exit(e);
            return 2;
        }

        o.geometry = o.geometry.empty() && yam->parsed() ? "rp3" : o.geometry;
        if (threads > 0) setenv("SPINLAB_THREADS", std::to_string(threads).c_str(), 1);

        struct command_def {
            const char* name;
            CLI::App* sub;
            std::function<command_output()> run;
        };
        const std::vector<command_def> defs = {
            {"clifford check", ccheck, [&] { return run_clifford_check(o); }},
            {"euclid killing", ekill, [&] { return run_euclid_killing(o, seed); }},
            {"euclid constants", econst, [&] { return run_euclid_constants(o); }},
            {"torus spectrum", tspec, [&] { return run_torus_spectrum(o); }},
            {"torus green", tgreen, [&] { return run_torus_green_cmd(o); }},
            {"sphere mass", smass, [&] { return run_sphere_mass(o); }},
            {"rp mass", rmass, [&] { return run_rp_mass(o); }},
            {"mass-endo", mendo, [&] { return run_mass_endo(o); }},
            {"yamabe", yam, [&] { return run_yamabe(o); }},
            {"suite", suite, [&] { return run_suite(o, seed); }},
        };
        const command_def* fired = nullptr;
        for (const command_def& d : defs)
            if (d.sub->parsed()) fired = &d;
        if (!fired) throw usage_error("a subcommand is required");

        json echo;
        echo["subcommand"] = fired->name;
        json opts = json::object();
        for (const opt_entry& e : reg)
            if (e.owner == fired->sub && e.opt->count() > 0)
                opts[e.key] = e.is_flag ? json(true) : json(e.opt->results().back());
        echo["options"] = opts;
        echo["output_path"] = out_path;
        echo["seed"] = seed;

        auto t0 = std::chrono::steady_clock::now();
        command_output res = fired->run();
        double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();

        std::string text;
        if (res.is_csv) {
            text = res.csv;
        } else {
            report_envelope env;
            env.config = echo;
            env.wall_time_ms = timing ? ms : 0;
            env.checks = res.checks;
            env.report = res.report;
            text = env.to_json().dump(2) + "\n";
        }
        if (out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) throw usage_error("cannot open output path '" + out_path + "'");
            out << text;
        }
        if (!res.note.empty()) std::cerr << res.note << "\n";

        for (const check_item& c : res.checks)
            if (!c.pass) return 1;
        return 0;
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
}

} // namespace spinlab
