#include "spinlab/criteria.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <functional>

#include "spinlab/clifford.hpp"
#include "spinlab/core/rng.hpp"
#include "spinlab/euclid.hpp"
#include "spinlab/mass_endo.hpp"
#include "spinlab/sphere_rp.hpp"
#include "spinlab/testspinor.hpp"
#include "spinlab/torus.hpp"

namespace spinlab {
namespace {

void push(std::vector<check_item>& out, const std::string& name, double measured, double tol) {
    out.push_back({name, measured <= tol, measured, tol});
}

void push_flag(std::vector<check_item>& out, const std::string& name, bool ok) {
    out.push_back({name, ok, ok ? 1.0 : 0.0, 1.0});
}

spin_structure spin_halves(std::initializer_list<double> entries) {
    rvec d((long)entries.size());
    int i = 0;
    for (double e : entries) d(i++) = e;
    return make_spin_structure(d);
}

// 1: algebra relations, volume element sign, nu / quaternionic existence table
void criterion_clifford(std::vector<check_item>& out, unsigned) {
    for (int n = 1; n <= 8; ++n) {
        clifford_rep rep = build_rep(n);
        std::string tag = "clifford.n" + std::to_string(n);
        push(out, tag + ".relation_defect", clifford_relation_defect(rep), 0.0);

        volume_element_t vol = volume_element(rep);
        int want_sign = (n * (n + 1) / 2) % 2 == 0 ? 1 : -1;
        push_flag(out, tag + ".omega_square_sign", vol.square_sign == want_sign);
        push(out, tag + ".omega_square_defect",
             (vol.omega * vol.omega - double(vol.square_sign) * cmat::Identity(rep.N, rep.N))
                 .cwiseAbs()
                 .maxCoeff(),
             0.0);

        bool nu_want = n % 4 != 3;
        bool nu_got = true;
        double nu_defect = 0;
        try {
            symmetry_automorphism nu = build_nu(rep);
            nu_defect = nu_anticommutator_defect(rep, nu);
        } catch (const n_unavailable&) {
            nu_got = false;
        }
        push_flag(out, tag + ".nu_exists", nu_got == nu_want);
        if (nu_got) push(out, tag + ".nu_defect", nu_defect, 0.0);

        int m = n % 8;
        bool q_want = m == 2 || m == 3 || m == 4;
        bool q_got = true;
        double q_defect = 0;
        try {
            quaternionic_structure q = build_quaternionic(rep);
            q_defect = q_commutator_defect(rep, q);
        } catch (const q_unavailable&) {
            q_got = false;
        }
        push_flag(out, tag + ".q_exists", q_got == q_want);
        if (q_got) push(out, tag + ".q_defect", q_defect, 0.0);
    }
}

// 2: finite-difference Dirac on the Killing family, 100 points per (n, sign)
void criterion_killing_fd(std::vector<check_item>& out, unsigned seed) {
    rng rg(seed);
    for (int n : {2, 3}) {
        clifford_rep rep = build_rep(n);
        cvec phi = rg.spinor(rep.N);
        for (int sign : {+1, -1}) {
            spinor_field_t fld = make_killing_field(rep, sign, phi);
            double worst = 0;
            for (int it = 0; it < 100; ++it) {
                rvec x = rg.point(n, -1.5, 1.5);
                cvec want = killing_dirac(rep, sign, phi, x);
                cvec got = dirac_fd_extrapolated(rep, fld, x);
                worst = std::max(worst, (got - want).norm() / want.norm());
            }
            std::string tag = "killing_fd.n" + std::to_string(n)
                              + (sign > 0 ? ".plus" : ".minus");
            push(out, tag + ".worst_rel", worst, 1e-6);
        }
    }
}

// 3: quadrature value of the functional on Killing spinors
void criterion_functional(std::vector<check_item>& out, unsigned seed) {
    rng rg(seed);
    for (int n : {2, 3}) {
        clifford_rep rep = build_rep(n);
        cvec phi = rg.spinor(rep.N);
        double target = 0.5 * n * std::pow(omega_k(n), 1.0 / n);
        for (int sign : {+1, -1}) {
            functional_report fr = functional_J(rep, make_killing_field(rep, sign, phi));
            std::string tag = "functional.n" + std::to_string(n)
                              + (sign > 0 ? ".plus" : ".minus");
            push(out, tag + ".rel_error", std::abs(fr.J - sign * target) / target, 1e-6);
        }
        if (n == 2)
            push(out, "functional.n2.two_sqrt_pi", std::abs(target - 3.5449077018110318),
                 1e-6 * 3.5449077018110318);
    }
}

// 4: closed-form spectra against the dense FD oracle, all four Z^2 structures
void criterion_torus_spectra(std::vector<check_item>& out, unsigned) {
    torus_geometry g = make_torus(rmat::Identity(2, 2));
    std::vector<int> Ls = {16, 24, 32};
    struct {
        spin_structure spin;
        double want;
        const char* tag;
    } cases[] = {{spin_halves({0.5, 0.5}), pi * std::sqrt(2.0), "hh"},
                 {spin_halves({0.5, 0.0}), pi, "h0"},
                 {spin_halves({0.0, 0.5}), pi, "0h"}};
    for (auto& c : cases) {
        std::string tag = std::string("torus_spectra.") + c.tag;
        auto sp = torus_spectrum(g, c.spin, 1);
        push(out, tag + ".mode_formula", std::abs(sp[0].eigenvalue - c.want), 1e-12);
        double resid = 0;
        double lam = torus_fd_smallest_eigenvalue_extrapolated(g, c.spin, Ls, &resid);
        push(out, tag + ".fd_error", std::abs(lam - c.want), 1e-3);
    }
    spin_structure triv = spin_halves({0.0, 0.0});
    auto sp0 = torus_spectrum(g, triv, 1);
    push_flag(out, "torus_spectra.trivial.mode_kernel",
              sp0[0].eigenvalue == 0.0 && sp0[0].multiplicity == 2);
    push_flag(out, "torus_spectra.trivial.fd_kernel_dim",
              torus_fd_kernel_dimension(g, triv, 16) == 2);
}

// 5: mode-sum Green function symmetries and oracle agreement, delta = (1/2,1/2)
void criterion_torus_green(std::vector<check_item>& out, unsigned seed) {
    torus_geometry g = make_torus(rmat::Identity(2, 2));
    spin_structure spn = spin_halves({0.5, 0.5});
    rng rg(seed);
    rvec x(2), y(2);
    x << 0.37, 0.82;
    y << 0.06, 0.55;

    green_result gr = torus_green(g, spn, x, y);
    rvec t = rg.point(2, -1, 1);
    green_result gt = torus_green(g, spn, x + t, y + t);
    push(out, "torus_green.translation", (gt.G - gr.G).cwiseAbs().maxCoeff(), 1e-5);

    green_result gba = torus_green(g, spn, y, x);
    push(out, "torus_green.antisymmetry", (gr.G + gba.G).cwiseAbs().maxCoeff(), 1e-5);
    push(out, "torus_green.adjoint", (gr.G.adjoint() - gba.G).cwiseAbs().maxCoeff(), 1e-5);

    rvec xi(2);
    xi << 0.5, 0.5;
    cmat op = cplx(0, 1) * g.rep.g(rvec(xi / xi.norm()));
    Eigen::SelfAdjointEigenSolver<cmat> es(op);
    cvec w = es.eigenvectors().col(1); // eigenvalue +1: D psi = 2 pi |xi| psi
    double lambda = 2.0 * pi * xi.norm();
    cvec applied = torus_green_apply_eigenspinor(g, spn, x, xi, w);
    cvec want = std::exp(cplx(0, 2 * pi) * xi.dot(x)) / lambda * w;
    push(out, "torus_green.eigenspinor", (applied - want).norm(), 1e-5);

    rvec d(2), zero = rvec::Zero(2);
    d << 0.5, 0.25; // grid node for every L in the schedule
    double resid = 0;
    cmat fdg = torus_fd_green_extrapolated(g, spn, d, {16, 24, 32, 40, 48}, &resid);
    cmat ms = torus_green(g, spn, d, zero).G;
    push(out, "torus_green.fd_agreement", (fdg - ms).cwiseAbs().maxCoeff(), 1e-5);
}

// 6: vanishing mass term on flat tori (all nontrivial Z^2 structures) and S^3
void criterion_mass_flat(std::vector<check_item>& out, unsigned) {
    torus_geometry g = make_torus(rmat::Identity(2, 2));
    rvec y(2);
    y << 0.3, 0.0;
    const char* tags[] = {"hh", "h0", "0h"};
    spin_structure spins[] = {spin_halves({0.5, 0.5}), spin_halves({0.5, 0.0}),
                              spin_halves({0.0, 0.5})};
    for (int i = 0; i < 3; ++i) {
        spin_structure spn = spins[i];
        flat_chart_evaluator ev;
        ev.n = 2;
        ev.rep = g.rep;
        ev.flat_radius = 0.45;
        ev.eval = [g, spn, y](const rvec& w) { return torus_green_split(g, spn, y + w, y); };
        mass_extraction ex = extract_mass(ev);
        push(out, std::string("mass_flat.torus_") + tags[i] + ".alpha_norm",
             ex.alpha.cwiseAbs().maxCoeff(), 1e-4);
    }
    stereo_chart ch = make_north_chart(3);
    rvec v0(3);
    v0 << 0.7, -0.4, 0.2;
    mass_extraction ex = extract_mass(sphere_flat_evaluator(ch, v0));
    push(out, "mass_flat.sphere3.alpha_norm", ex.alpha.cwiseAbs().maxCoeff(), 1e-4);
}

// 7: projective-space mass constant, sign flip, closed-form agreement
void criterion_rp_mass(std::vector<check_item>& out, unsigned) {
    rvec v0(3);
    v0 << 1.0, 0.0, 0.0;
    double cplus = 0, cminus = 0;
    for (int sign : {+1, -1}) {
        rp_geometry geom = make_rp_geometry(0, sign);
        mass_extraction ex = mass_endo_rp(geom, v0);
        rp_mass_report rp = rp_mass_constant(ex);
        std::string tag = std::string("rp_mass.") + (sign > 0 ? "plus" : "minus");
        push(out, tag + ".off_diag_residue", rp.residue, 1e-4 * std::abs(rp.c));
        push_flag(out, tag + ".c_nonzero", std::abs(rp.c) > 1e-6);
        double c_cf = rp_mass_closed_form(geom, v0)(0, 0).real();
        push(out, tag + ".closed_form_rel", std::abs(rp.c - c_cf) / std::abs(c_cf), 1e-4);
        (sign > 0 ? cplus : cminus) = rp.c;
    }
    push_flag(out, "rp_mass.sign_flip", cplus * cminus < 0);
    push(out, "rp_mass.magnitude_match", std::abs(std::abs(cplus) - std::abs(cminus)),
         1e-4 * std::abs(cplus));
}

// 8: synthetic three-dimensional expansion constants and remainder exponents
void criterion_synthetic(std::vector<check_item>& out, unsigned) {
    clifford_rep rep = build_rep(3);
    model_constants_t mc = model_constants(3);
    cvec psi0 = cvec::Zero(2);
    psi0(0) = 1.0;
    std::vector<double> es = {0.1, 0.05, 0.025};
    auto run = [&](double nu) {
        std::vector<test_functional_report> outr;
        cvec psi1 = nu * psi0;
        harmonic_source src = synthetic_flat_source(rep, psi0, psi1);
        for (double eps : es) {
            test_spinor_params p = make_test_spinor_params(3, eps, 0.25, psi0, psi1, src);
            outr.push_back(evaluate_test_functional(build_test_spinor(p, +1)));
        }
        return outr;
    };
    std::vector<test_functional_report> base = run(0.0), pert = run(-1.0);

    // leading constants from a two-term fit a + b eps^{9/4} of num/eps^2, den/eps^2
    Eigen::MatrixXd A(3, 2);
    Eigen::VectorXd bn(3), bd(3), bk(3);
    for (int i = 0; i < 3; ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = std::pow(es[i], 2.25);
        bn(i) = base[i].numerator / (es[i] * es[i]);
        bd(i) = base[i].denominator / (es[i] * es[i]);
    }
    double num_fit = Eigen::VectorXd(A.colPivHouseholderQr().solve(bn))(0);
    double den_fit = Eigen::VectorXd(A.colPivHouseholderQr().solve(bd))(0);
    double num_want = 9.0 * std::pow(mc.I, 4.0 / 3.0); // 30.0074
    double den_want = 3.0 * mc.I;                      // 7.4022
    push(out, "synthetic.num_leading_rel", std::abs(num_fit / num_want - 1.0), 0.10);
    push(out, "synthetic.den_leading_rel", std::abs(den_fit / den_want - 1.0), 0.10);

    // eps^4 coefficient of the nu shift against -n C0, fitting away eps^{3/2}
    for (int i = 0; i < 3; ++i) {
        bk(i) = (pert[i].denominator - base[i].denominator) / (-1.0 * std::pow(es[i], 4));
        A(i, 1) = std::pow(es[i], 1.5);
    }
    double k_fit = Eigen::VectorXd(A.colPivHouseholderQr().solve(bk))(0);
    double nc0 = 3.0 * mc.C0;
    push(out, "synthetic.nu_shift_rel", std::abs(k_fit + nc0) / nc0, 0.15);
    push_flag(out, "synthetic.nu_pair_re", pert[0].prediction.nu_pair_re == -1.0);

    // middle-annulus denominator decay: log-log slope over the eps grid
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < 3; ++i) {
        double lx = std::log(es[i]), ly = std::log(std::abs(pert[i].den_middle));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double slope = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
    out.push_back({"synthetic.middle_exponent_floor", slope >= 4.125, slope, 4.125});
}

// 9: strict-inequality verdicts on both projective structures plus flat-torus refusal
void criterion_yamabe(std::vector<check_item>& out, unsigned) {
    rvec p = rvec::Zero(3);
    p(0) = 1.0;
    for (int sign : {+1, -1}) {
        rp_geometry geom = make_rp_geometry(0, sign);
        yamabe_verdict_result v = yamabe_verdict_rp(geom, p);
        std::string tag = std::string("yamabe.rp3_") + (sign > 0 ? "plus" : "minus");
        push_flag(out, tag + ".favorable_sign", v.sign == sign);
        push_flag(out, tag + ".strict_below", v.verdict == verdict_kind::strict_below
                                                  && !v.rows.empty()
                                                  && v.rows.back().strict_below);

        // the opposite-sign functional stays above target at the same smallest eps
        double c = v.mass_eigenvalue;
        cvec psi0 = cvec::Zero(2);
        psi0(0) = 1.0;
        cvec psi1 = -c * psi0;
        harmonic_source src = rp_harmonic_source(geom, p, psi0, psi1);
        double eps = v.rows.back().epsilon;
        test_spinor_params prm = make_test_spinor_params(3, eps, 0.25, psi0, psi1, src, 1.96);
        test_functional_report other =
            evaluate_test_functional(build_test_spinor(prm, -v.sign));
        push_flag(out, tag + ".exactly_one", !other.strict_below);
    }

    for (int n : {2, 3}) {
        torus_geometry g = make_torus(rmat::Identity(n, n));
        rvec d = rvec::Constant(n, 0.5);
        rvec y = rvec::Zero(n);
        y(0) = 0.3;
        bool refused = false;
        try {
            (void)yamabe_verdict_torus(g, make_spin_structure(d), y);
        } catch (const zero_mass_endomorphism&) {
            refused = true;
        }
        push_flag(out, std::string("yamabe.flat_t") + std::to_string(n) + ".zero_mass",
                  refused);
    }
}

struct criterion_spec {
    const char* name;
    double budget_seconds;
    std::function<void(std::vector<check_item>&, unsigned)> body;
};

const criterion_spec kCriteria[] = {
    {"clifford_algebra", 1, criterion_clifford},
    {"killing_fd", 5, criterion_killing_fd},
    {"euclid_functional", 10, criterion_functional},
    {"torus_spectra", 60, criterion_torus_spectra},
    {"torus_green", 120, criterion_torus_green},
    {"mass_flat_vanishing", 120, criterion_mass_flat},
    {"rp_mass_constant", 120, criterion_rp_mass},
    {"synthetic_expansion", 300, criterion_synthetic},
    {"yamabe_verdicts", 300, criterion_yamabe},
};

} // namespace

int criterion_count() { return int(sizeof(kCriteria) / sizeof(kCriteria[0])); }

criterion_result run_criterion(int k, unsigned seed) {
    if (k < 1 || k > criterion_count())
        throw std::invalid_argument("criterion index out of range: " + std::to_string(k));
    const criterion_spec& spec = kCriteria[k - 1];
    criterion_result res;
    res.index = k;
    res.name = spec.name;
    res.budget_seconds = spec.budget_seconds;
    auto t0 = std::chrono::steady_clock::now();
    try {
        spec.body(res.checks, seed);
    } catch (const std::exception& e) {
        res.error = e.what();
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = res.error.empty();
    for (const check_item& c : res.checks) ok = ok && c.pass;
    // measured time masked to 0: serialized reports must not depend on wall time
    res.checks.push_back(
        {res.name + ".runtime_budget", res.seconds <= res.budget_seconds, 0.0,
         res.budget_seconds});
    res.pass = ok && res.seconds <= res.budget_seconds;
    return res;
}

std::vector<criterion_result> run_all_criteria(unsigned seed) {
    std::vector<criterion_result> out;
    for (int k = 1; k <= criterion_count(); ++k) out.push_back(run_criterion(k, seed));
    return out;
}

} // namespace spinlab
