#include "spinlab/mass_endo.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "spinlab/core/extrapolate.hpp"

namespace spinlab {

namespace {

std::vector<rvec> axis_directions(int n) {
    std::vector<rvec> dirs;
    for (int k = 0; k < n; ++k) {
        rvec e = rvec::Zero(n);
        e(k) = 1.0;
        dirs.push_back(e);
        dirs.push_back(-e);
    }
    return dirs;
}

} // namespace

mass_extraction extract_mass(const flat_chart_evaluator& ev, std::vector<double> radii,
                             std::vector<rvec> directions, double tolerance) {
    if (ev.n < 1 || !ev.eval) throw std::invalid_argument("evaluator not set up");
    if (!(ev.flat_radius > 0)) throw chart_not_flat("flat_radius must be positive");
    if (radii.empty())
        for (int k = 0; k < 6; ++k) radii.push_back(ev.flat_radius / 3.0 * std::pow(2.0, -k));
    for (size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0)) throw std::invalid_argument("radii must be positive");
        if (i > 0 && !(radii[i] < radii[i - 1]))
            throw std::invalid_argument("radii must decrease");
        if (radii[i] >= ev.flat_radius)
            throw chart_not_flat("extraction radius outside the flat ball");
    }
    if (radii.size() < 2) throw std::invalid_argument("need at least two radii");
    if (directions.empty()) directions = axis_directions(ev.n);
    for (auto& d : directions) {
        if (d.size() != ev.n || d.norm() == 0) throw std::invalid_argument("bad direction");
        d /= d.norm();
    }
    // antipodal closure so the direction average cancels odd terms of v
    for (const rvec& d : directions) {
        bool paired = false;
        for (const rvec& e : directions) paired = paired || (d + e).norm() < 1e-12;
        if (!paired) throw std::invalid_argument("directions must be closed under v -> -v");
    }

    const double om = omega_k(ev.n - 1);
    std::vector<double> t;
    std::vector<cmat> avg;
    for (double r : radii) {
        cmat acc = cmat::Zero(ev.rep.N, ev.rep.N);
        for (const rvec& d : directions)
            acc += om * ev.eval(r * d) + ev.rep.g(d) * std::pow(r, 1.0 - ev.n);
        avg.push_back(acc / double(directions.size()));
        t.push_back(r * r);
    }
    double resid = 0;
    cmat alpha = neville_matrix(t, avg, &resid);
    if (!(resid <= tolerance)) throw non_convergent(resid);

    mass_extraction out;
    out.alpha = alpha;
    out.residual = resid;
    out.radii = std::move(radii);
    out.directions = std::move(directions);
    out.hermitian_defect = (alpha - alpha.adjoint()).cwiseAbs().maxCoeff();
    return out;
}

cmat conformal_rescale_mass(const cmat& alpha, double f_at_y, int n) {
    if (!(f_at_y > 0)) throw std::invalid_argument("conformal factor must be positive");
    return std::pow(f_at_y, 1.0 - n) * alpha;
}

mass_spectrum_report mass_spectrum(const cmat& alpha, const symmetry_automorphism* nu,
                                   double tolerance, double defect_tolerance) {
    mass_spectrum_report rep;
    rep.hermitian_defect = (alpha - alpha.adjoint()).cwiseAbs().maxCoeff();
    if (!(rep.hermitian_defect <= defect_tolerance))
        throw hermitian_defect_too_large(rep.hermitian_defect);
    cmat h = 0.5 * (alpha + alpha.adjoint());
    Eigen::SelfAdjointEigenSolver<cmat> es(h);
    rvec ev = es.eigenvalues();
    rep.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end());
    if (nu) {
        rep.nu_supplied = true;
        // operator composition: conjugate-linear nu has matrix action B conj(.)
        cmat anti = nu->kind == nu_kind::complex_linear ? cmat(nu->B * h + h * nu->B)
                                                        : cmat(nu->B * h.conjugate() + h * nu->B);
        rep.nu_anticommutator = anti.cwiseAbs().maxCoeff();
        double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
        size_t m = rep.eigenvalues.size();
        for (size_t i = 0; i < m; ++i)
            if (std::abs(rep.eigenvalues[i] + rep.eigenvalues[m - 1 - i]) > tolerance * scale)
                rep.symmetric_spectrum = false;
    }
    return rep;
}

double q_mass_commutator(const quaternionic_structure& q, const cmat& alpha) {
    // Q alpha - alpha Q with Q v = B conj(v): matrix B conj(alpha) - alpha B
    return (q.B * alpha.conjugate() - alpha * q.B).cwiseAbs().maxCoeff();
}

} // namespace spinlab
