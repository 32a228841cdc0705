#include "spinlab/testspinor.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "spinlab/core/compensated.hpp"
#include "spinlab/core/quadrature.hpp"
#include "spinlab/core/rng.hpp"
#include "spinlab/mass_endo.hpp"

namespace spinlab {

namespace {
double fmodel(double r) { return 1.0 / (1.0 + r * r); }
}

double test_spinor_params::eps0() const {
    double x = xi();
    return std::pow(x, n) / epsilon * std::pow(fmodel(x / epsilon), n / 2.0);
}

test_spinor_params make_test_spinor_params(int n, double epsilon, double q, const cvec& psi0,
                                           const cvec& psi1, harmonic_source source,
                                           double chart_radius) {
    if (n < 2 || n > 3) throw dimension_out_of_range("test spinor supports n in {2,3}");
    if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
    double qlo = (n - 1.0) / (n * (n + 1.0)), qhi = 1.0 / n;
    if (!(q > qlo && q < qhi))
        throw std::invalid_argument("cutoff exponent q outside ((n-1)/(n(n+1)), 1/n)");
    if (psi0.norm() == 0) throw std::invalid_argument("psi0 must be nonzero");
    if (!source.psi || !source.theta)
        throw expansion_data_missing("harmonic source with psi and theta required");

    test_spinor_params p;
    p.n = n;
    p.epsilon = epsilon;
    p.q = q;
    p.psi0 = psi0 / psi0.norm();
    p.psi1 = psi1;
    p.source = std::move(source);
    p.chart_radius = chart_radius;
    if (!(2 * p.xi() < chart_radius))
        throw std::invalid_argument("2 xi must lie inside the flat chart ball");
    double ratio = p.eps0() / std::pow(epsilon, n - 1.0);
    if (!(ratio >= 0.5 && ratio <= 2.0))
        throw std::invalid_argument("eps0/eps^{n-1} outside [0.5, 2]: epsilon too coarse");
    return p;
}

double eta_cutoff(double r, double xi) {
    double t = (r - xi) / xi;
    if (t <= 0) return 1.0;
    if (t >= 1) return 0.0;
    return 1.0 - (3 * t * t - 2 * t * t * t);
}

double eta_cutoff_derivative(double r, double xi) {
    double t = (r - xi) / xi;
    if (t <= 0 || t >= 1) return 0.0;
    return -(6 * t - 6 * t * t) / xi;
}

int test_spinor_field::region(double r) const {
    double x = params.xi();
    if (r < x) return 0;
    if (r < 2 * x) return 1;
    return 2;
}

namespace {

// region formulas shared by value/dirac and the continuity check
cvec inner_value(const test_spinor_params& p, int s, const clifford_rep& rep, const rvec& x) {
    double r = x.norm();
    double co = std::pow(fmodel(r / p.epsilon), p.n / 2.0);
    return co * (p.psi0 - double(s) / p.epsilon * (rep.g(x) * p.psi0)) - double(s) * p.eps0() * p.psi1;
}

cvec inner_dirac(const test_spinor_params& p, int s, const clifford_rep& rep, const rvec& x) {
    double r = x.norm();
    double co = std::pow(fmodel(r / p.epsilon), p.n / 2.0 + 1.0);
    return double(s) * (p.n / p.epsilon) * co
           * (p.psi0 - double(s) / p.epsilon * (rep.g(x) * p.psi0));
}

// middle-region formulas take theta as input; psi is reconstructed from the
// contract psi = gamma(x) psi0/|x|^n + psi1 + theta, so one source call per
// point suffices (theta chains to psi internally on the Green route)
cvec middle_value(const test_spinor_params& p, int s, const clifford_rep& rep, const rvec& x,
                  const cvec& th) {
    double r = x.norm(), xi = p.xi();
    double e = eta_cutoff(r, xi);
    double fx = std::pow(fmodel(xi / p.epsilon), p.n / 2.0);
    cvec ps = rep.g(x) * p.psi0 / std::pow(r, p.n) + p.psi1 + th;
    return -double(s) * p.eps0() * (ps - e * th) + e * fx * p.psi0;
}

cvec middle_dirac(const test_spinor_params& p, int s, const clifford_rep& rep, const rvec& x,
                  const cvec& th) {
    double r = x.norm(), xi = p.xi();
    double de = eta_cutoff_derivative(r, xi);
    double fx = std::pow(fmodel(xi / p.epsilon), p.n / 2.0);
    cmat gd = rep.g(x / r);
    return double(s) * p.eps0() * de * (gd * th) + fx * de * (gd * p.psi0);
}

// source-driven variant used by the continuity check: any psi1/theta
// inconsistency shows up as an interface jump against the inner/outer pieces
cvec middle_value_source(const test_spinor_params& p, int s, const rvec& x) {
    double r = x.norm(), xi = p.xi();
    double e = eta_cutoff(r, xi);
    double fx = std::pow(fmodel(xi / p.epsilon), p.n / 2.0);
    cvec ps = p.source.psi(x), th = p.source.theta(x);
    return -double(s) * p.eps0() * (ps - e * th) + e * fx * p.psi0;
}

cvec outer_value(const test_spinor_params& p, int s, const rvec& x) {
    return -double(s) * p.eps0() * p.source.psi(x);
}

thread_local clifford_rep cached_rep; // per-n gamma cache for the field calls

const clifford_rep& rep_for(int n) {
    if (cached_rep.n != n) cached_rep = build_rep(n);
    return cached_rep;
}

} // namespace

cvec test_spinor_field::value(const rvec& x) const {
    const clifford_rep& rep = rep_for(params.n);
    switch (region(x.norm())) {
        case 0: return inner_value(params, sign, rep, x);
        case 1: return middle_value(params, sign, rep, x, params.source.theta(x));
        default: return outer_value(params, sign, x);
    }
}

cvec test_spinor_field::dirac(const rvec& x) const {
    const clifford_rep& rep = rep_for(params.n);
    switch (region(x.norm())) {
        case 0: return inner_dirac(params, sign, rep, x);
        case 1: return middle_dirac(params, sign, rep, x, params.source.theta(x));
        default: return cvec(cvec::Zero(params.psi0.size()));
    }
}

test_spinor_field build_test_spinor(const test_spinor_params& p, int sign) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +-1");
    test_spinor_field f;
    f.params = p;
    f.sign = sign;
    // continuity across both interfaces: catches inconsistent psi1/theta data
    const clifford_rep& rep = rep_for(p.n);
    rng rg(9001);
    double xi = p.xi();
    for (int trial = 0; trial < 20; ++trial) {
        rvec d = rg.direction(p.n);
        cvec a = inner_value(p, sign, rep, rvec(xi * d));
        cvec b = middle_value_source(p, sign, rvec(xi * d));
        double scale = std::max(1.0, a.norm());
        if ((a - b).norm() > 1e-10 * scale)
            throw continuity_violation("jump across r = xi");
        cvec c = middle_value_source(p, sign, rvec(2 * xi * d));
        cvec e = outer_value(p, sign, rvec(2 * xi * d));
        scale = std::max(1.0, c.norm());
        if ((c - e).norm() > 1e-10 * scale)
            throw continuity_violation("jump across r = 2 xi");
    }
    return f;
}

test_functional_report evaluate_test_functional(const test_spinor_field& f,
                                                const quadrature_resolution& res) {
    const test_spinor_params& p = f.params;
    const clifford_rep& rep = rep_for(p.n);
    const int s = f.sign;
    const double xi = p.xi(), eps = p.epsilon;
    const double pw = 2.0 * p.n / (p.n + 1.0); // numerator exponent on |D psi|

    sphere_rule sq = sphere_quadrature(p.n, res.sphere_res);

    quad_rule inner = panel_rule(0.0, std::min(8 * eps, xi), res.inner_panels, res.radial_pts);
    if (8 * eps < xi) {
        quad_rule tail = panel_rule(8 * eps, xi, res.tail_panels, res.radial_pts);
        inner.x.insert(inner.x.end(), tail.x.begin(), tail.x.end());
        inner.w.insert(inner.w.end(), tail.w.begin(), tail.w.end());
    }
    compensated_sum num_acc, den_acc;
    for (size_t i = 0; i < inner.x.size(); ++i) {
        double r = inner.x[i];
        if (r == 0.0) continue;
        double wr = inner.w[i] * std::pow(r, p.n - 1.0);
        for (size_t a = 0; a < sq.dir.size(); ++a) {
            rvec x = r * sq.dir[a];
            cvec psi = inner_value(p, s, rep, x);
            cvec dpsi = inner_dirac(p, s, rep, x);
            num_acc.add(wr * sq.w[a] * std::pow(dpsi.norm(), pw));
            den_acc.add(wr * sq.w[a] * dpsi.dot(psi).real());
        }
    }
    compensated_sum numm_acc, denm_acc;
    quad_rule mid = panel_rule(xi, 2 * xi, res.middle_panels, res.radial_pts);
    for (size_t i = 0; i < mid.x.size(); ++i) {
        double r = mid.x[i];
        double wr = mid.w[i] * std::pow(r, p.n - 1.0);
        for (size_t a = 0; a < sq.dir.size(); ++a) {
            rvec x = r * sq.dir[a];
            cvec th = p.source.theta(x); // one source call per point
            cvec psi = middle_value(p, s, rep, x, th);
            cvec dpsi = middle_dirac(p, s, rep, x, th);
            numm_acc.add(wr * sq.w[a] * std::pow(dpsi.norm(), pw));
            denm_acc.add(wr * sq.w[a] * dpsi.dot(psi).real());
        }
    }
    // the outer region contributes nothing: D psi = 0 there

    test_functional_report rep_out;
    rep_out.num_middle = numm_acc.value();
    rep_out.den_middle = denm_acc.value();
    double num_raw = num_acc.value() + rep_out.num_middle;
    rep_out.denominator = den_acc.value() + rep_out.den_middle;
    if (s > 0 && !(rep_out.denominator > 0))
        throw denominator_wrong_sign("psi_eps^+ must have positive denominator");
    if (s < 0 && !(rep_out.denominator < 0))
        throw denominator_wrong_sign("psi_eps^- must have negative denominator");
    rep_out.numerator = std::pow(num_raw, (p.n + 1.0) / p.n);
    rep_out.J = rep_out.numerator / rep_out.denominator;
    rep_out.target = (p.n / 2.0) * std::pow(omega_k(p.n), 1.0 / p.n);
    rep_out.strict_below = (s > 0 ? rep_out.J : -rep_out.J) < rep_out.target;

    model_constants_t mc = model_constants(p.n);
    rep_out.prediction.num_leading = p.n * p.n * std::pow(mc.I, (p.n + 1.0) / p.n);
    rep_out.prediction.den_leading = p.n * mc.I;
    rep_out.prediction.c0 = mc.C0;
    rep_out.prediction.nu_pair_re = p.psi0.dot(p.psi1).real();
    return rep_out;
}

harmonic_source synthetic_flat_source(const clifford_rep& rep, const cvec& psi0,
                                      const cvec& psi1) {
    int n = rep.n;
    harmonic_source src;
    src.psi = [rep, psi0, psi1, n](const rvec& x) {
        double r = x.norm();
        return cvec(rep.g(x) * psi0 / std::pow(r, n) + psi1);
    };
    src.theta = [N = int(psi0.size())](const rvec&) { return cvec(cvec::Zero(N)); };
    return src;
}

harmonic_source rp_harmonic_source(const rp_geometry& geom, const rvec& p, const cvec& psi0,
                                   const cvec& psi1) {
    rp_geometry g = geom;
    rvec base = p;
    double f0 = geom.chart.factor(p);
    double om = omega_k(geom.n - 1);
    harmonic_source src;
    src.psi = [g, base, f0, om, psi0](const rvec& w) {
        return cvec(-om * (green_rp(g, base + w / f0, base) * psi0));
    };
    const clifford_rep& rep = g.chart.rep;
    int n = g.n;
    auto psi_fn = src.psi;
    src.theta = [psi_fn, rep, psi0, psi1, n](const rvec& w) {
        double r = w.norm();
        return cvec(psi_fn(w) - rep.g(w) * psi0 / std::pow(r, n) - psi1);
    };
    return src;
}

namespace {

std::vector<double> default_eps_schedule() { return {0.1, 0.05, 0.025, 0.0125}; }

yamabe_verdict_result run_verdict(int n, const cvec& psi0, const cvec& psi1,
                                  const harmonic_source& src, double chart_radius,
                                  std::vector<double> eps_list,
                                  const quadrature_resolution& res) {
    yamabe_verdict_result out;
    out.nu_pair_re = (psi0 / psi0.norm()).dot(psi1).real();
    if (eps_list.empty()) eps_list = default_eps_schedule();
    if (std::abs(out.nu_pair_re) < 1e-12) {
        out.verdict = verdict_kind::inconclusive; // Re<psi0,psi1> = 0: leading term vanishes
        return out;
    }
    out.sign = out.nu_pair_re < 0 ? +1 : -1;
    for (double eps : eps_list) {
        test_spinor_params p = make_test_spinor_params(n, eps, 0.25, psi0, psi1, src,
                                                       chart_radius);
        test_functional_report r = evaluate_test_functional(build_test_spinor(p, out.sign), res);
        out.rows.push_back({eps, r.numerator, r.denominator, r.J, r.target, r.strict_below});
    }
    out.verdict = out.rows.back().strict_below ? verdict_kind::strict_below
                                               : verdict_kind::not_below;
    return out;
}

} // namespace

yamabe_verdict_result yamabe_verdict_rp(const rp_geometry& geom, const rvec& p,
                                        std::vector<double> eps_list,
                                        const quadrature_resolution& res) {
    mass_extraction ex = mass_endo_rp(geom, p);
    Eigen::SelfAdjointEigenSolver<cmat> es(cmat(0.5 * (ex.alpha + ex.alpha.adjoint())));
    int idx = 0;
    es.eigenvalues().cwiseAbs().maxCoeff(&idx);
    double c = es.eigenvalues()(idx);
    if (std::abs(c) <= std::max(100 * ex.residual, 1e-8))
        throw zero_mass_endomorphism("mass endomorphism has no nonzero eigenvalue");
    cvec psi0 = es.eigenvectors().col(idx);
    cvec psi1 = -(ex.alpha * psi0);

    harmonic_source src = rp_harmonic_source(geom, p, psi0, psi1);
    double chart_radius = 0.98 * 2.0 / std::max(1.0, p.norm());
    yamabe_verdict_result out =
        run_verdict(geom.n, psi0, psi1, src, chart_radius, std::move(eps_list), res);
    out.mass_eigenvalue = c;
    return out;
}

yamabe_verdict_result yamabe_verdict_torus(const torus_geometry& geom,
                                           const spin_structure& spin, const rvec& p) {
    flat_chart_evaluator ev;
    ev.n = geom.n;
    ev.rep = geom.rep;
    rmat b = geom.basis;
    double smin = b.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).singularValues().minCoeff();
    ev.flat_radius = 0.45 * smin;
    torus_geometry g = geom;
    spin_structure sp = spin;
    rvec base = p;
    ev.eval = [g, sp, base](const rvec& w) { return torus_green_split(g, sp, base + w, base); };
    mass_extraction ex = extract_mass(ev);
    Eigen::SelfAdjointEigenSolver<cmat> es(cmat(0.5 * (ex.alpha + ex.alpha.adjoint())));
    double cmax = es.eigenvalues().cwiseAbs().maxCoeff();
    if (cmax <= std::max(100 * ex.residual, 1e-8))
        throw zero_mass_endomorphism("flat torus: mass endomorphism vanishes");
    yamabe_verdict_result out; // unreachable on flat tori
    out.mass_eigenvalue = cmax;
    return out;
}

yamabe_verdict_result yamabe_verdict_synthetic(int n, double nu_pair,
                                               std::vector<double> eps_list,
                                               const quadrature_resolution& res) {
    clifford_rep rep = build_rep(n);
    cvec psi0 = cvec::Zero(rep.N);
    psi0(0) = 1.0;
    cvec psi1 = nu_pair * psi0;
    yamabe_verdict_result out =
        run_verdict(n, psi0, psi1, synthetic_flat_source(rep, psi0, psi1),
                    std::numeric_limits<double>::infinity(), std::move(eps_list), res);
    out.mass_eigenvalue = -nu_pair; // wiring: psi1 = -alpha psi0
    return out;
}

} // namespace spinlab
