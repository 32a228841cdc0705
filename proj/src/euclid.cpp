#include "spinlab/euclid.hpp"

#include <cmath>

#include "spinlab/core/compensated.hpp"
#include "spinlab/core/extrapolate.hpp"
#include "spinlab/core/quadrature.hpp"

namespace spinlab {

double omega_k(int k) {
    return 2.0 * std::pow(pi, 0.5 * (k + 1)) / std::tgamma(0.5 * (k + 1));
}

double model_I_quadrature(int n) {
    return omega_k(n - 1) * integrate_halfline(
                                [n](double r) {
                                    return std::pow(r, n - 1) * std::pow(1.0 + r * r, -double(n));
                                },
                                4.0, 32, 20);
}

double model_C0_quadrature(int n) {
    return omega_k(n - 1) * integrate_halfline(
                                [n](double r) {
                                    return std::pow(r, n - 1) * std::pow(1.0 + r * r, -(0.5 * n + 1.0));
                                },
                                4.0, 32, 20);
}

model_constants_t model_constants(int n) {
    if (n < 1 || n > 12) throw dimension_out_of_range("model_constants: n must lie in [1,12]");
    model_constants_t c;
    c.n = n;
    c.omega_nm1 = omega_k(n - 1);
    c.omega_n = omega_k(n);
    c.I = c.omega_n / std::pow(2.0, n);
    c.C0 = c.omega_nm1 / n;
    double c0q = model_C0_quadrature(n);
    if (std::abs(c0q - c.C0) > 1e-10 * std::abs(c.C0))
        throw std::runtime_error("model_constants: C0 quadrature cross-check failed");
    return c;
}

cmat green_euclidean(const clifford_rep& rep, const rvec& x, const rvec& y) {
    rvec d = x - y;
    double r = d.norm();
    if (r == 0.0) throw coincident_points("green_euclidean: x = y");
    return -(1.0 / omega_k(rep.n - 1)) * rep.g(d) / std::pow(r, rep.n);
}

cvec killing_spinor(const clifford_rep& rep, int sign, const cvec& phi, const rvec& x) {
    double f = 1.0 / (1.0 + x.squaredNorm());
    cvec v = phi - double(sign) * (rep.g(x) * phi);
    return std::pow(f, 0.5 * rep.n) * v;
}

cvec killing_dirac(const clifford_rep& rep, int sign, const cvec& phi, const rvec& x) {
    double f = 1.0 / (1.0 + x.squaredNorm());
    return double(sign) * rep.n * f * killing_spinor(rep, sign, phi, x);
}

spinor_field_t make_killing_field(const clifford_rep& rep, int sign, const cvec& phi) {
    spinor_field_t fld;
    fld.kind = sign > 0 ? field_kind::killing_plus : field_kind::killing_minus;
    fld.eval = [rep, sign, phi](const rvec& x) { return killing_spinor(rep, sign, phi, x); };
    fld.dirac = [rep, sign, phi](const rvec& x) { return killing_dirac(rep, sign, phi, x); };
    return fld;
}

spinor_field_t make_plane_wave(const clifford_rep& rep, const rvec& xi, const cvec& w) {
    spinor_field_t fld;
    fld.kind = field_kind::plane_wave;
    const cplx tpi(0.0, 2.0 * pi);
    fld.eval = [xi, w, tpi](const rvec& x) { return cvec(std::exp(tpi * xi.dot(x)) * w); };
    fld.dirac = [rep, xi, w, tpi](const rvec& x) {
        return cvec(std::exp(tpi * xi.dot(x)) * tpi * (rep.g(xi) * w));
    };
    return fld;
}

spinor_field_t make_green_column(const clifford_rep& rep, const rvec& y, const cvec& psi0) {
    spinor_field_t fld;
    fld.kind = field_kind::green_column;
    fld.eval = [rep, y, psi0](const rvec& x) { return cvec(green_euclidean(rep, x, y) * psi0); };
    fld.dirac = [rep](const rvec&) { return cvec(cvec::Zero(rep.N)); }; // harmonic off the pole
    return fld;
}

cvec dirac_fd(const clifford_rep& rep, const spinor_field_t& field, const rvec& x, double h) {
    if (h <= 0) throw std::invalid_argument("dirac_fd: h must be positive");
    if (x.norm() + h > field.domain_radius)
        throw stencil_leaves_domain("dirac_fd: stencil leaves the field domain");
    cvec out = cvec::Zero(rep.N);
    for (int k = 0; k < rep.n; ++k) {
        rvec xp = x, xm = x;
        xp(k) += h;
        xm(k) -= h;
        out += rep.gamma[k] * ((field.eval(xp) - field.eval(xm)) / (2.0 * h));
    }
    return out;
}

cvec dirac_fd_extrapolated(const clifford_rep& rep, const spinor_field_t& field, const rvec& x,
                           double h0, int levels, double* residual) {
    std::vector<double> t;
    std::vector<cmat> vals;
    for (int j = 0; j < levels; ++j) {
        double h = h0 / double(1 << j);
        t.push_back(h * h);
        vals.push_back(dirac_fd(rep, field, x, h));
    }
    cmat lim = neville_matrix(t, vals, residual);
    return cvec(lim.col(0));
}

functional_report functional_J(const clifford_rep& rep, const spinor_field_t& field,
                               const quad_scheme& q) {
    if (!field.dirac)
        throw std::invalid_argument("functional_J: field must provide a closed-form Dirac image");
    if (field.kind != field_kind::killing_plus && field.kind != field_kind::killing_minus)
        throw std::invalid_argument("functional_J: only the Killing variants integrate over R^n");
    const int n = rep.n;
    const double p = 2.0 * n / (n + 1.0);
    sphere_rule sq = sphere_quadrature(n, q.sphere_res);

    // radial nodes: panels on [0, rsplit] + u = 1/r tail substitution
    quad_rule head = panel_rule(0.0, q.rsplit, q.radial_panels, q.radial_pts);
    quad_rule tail = panel_rule(0.0, 1.0 / q.rsplit, q.radial_panels / 2, q.radial_pts);

    compensated_sum num_int, den_int;
    auto accumulate = [&](double r, double wr) {
        if (r == 0.0) return;
        double wgeom = wr * std::pow(r, n - 1);
        for (size_t a = 0; a < sq.w.size(); ++a) {
            rvec x = r * sq.dir[a];
            cvec dpsi = field.dirac(x);
            cvec psi = field.eval(x);
            double w = wgeom * sq.w[a];
            num_int.add(w * std::pow(dpsi.norm(), p));
            den_int.add(w * (dpsi.dot(psi)).real()); // Eigen dot conjugates the left arg
        }
    };
    for (size_t i = 0; i < head.x.size(); ++i) accumulate(head.x[i], head.w[i]);
    for (size_t i = 0; i < tail.x.size(); ++i) {
        double u = tail.x[i];
        if (u == 0.0) continue;
        accumulate(1.0 / u, tail.w[i] / (u * u));
    }

    functional_report rep_out;
    rep_out.numerator = std::pow(num_int.value(), (n + 1.0) / n);
    rep_out.denominator = den_int.value();
    rep_out.target = 0.5 * n * std::pow(omega_k(n), 1.0 / n);
    if (std::abs(rep_out.denominator) < 1e-12 * std::max(1.0, rep_out.numerator))
        throw denominator_vanishes("functional_J: denominator below tolerance");
    rep_out.J = rep_out.numerator / rep_out.denominator;
    rep_out.strict_below = rep_out.J < rep_out.target;
    return rep_out;
}

} // namespace spinlab
