#include "spinlab/sphere_rp.hpp"

#include <cmath>

namespace spinlab {

namespace {
constexpr double kPoleTol = 1e-12;
}

rvec stereo_chart::to_chart(const rvec& x) const {
    if (x.size() != n + 1) throw std::invalid_argument("ambient point has wrong dimension");
    rvec z = rot.transpose() * x;
    double denom = 1.0 - z(n);
    if (std::abs(denom) < kPoleTol) throw pole_in_chart("point at the chart pole");
    return z.head(n) / denom;
}

rvec stereo_chart::from_chart(const rvec& u) const {
    if (u.size() != n) throw std::invalid_argument("chart point has wrong dimension");
    double q = u.squaredNorm();
    rvec z(n + 1);
    z.head(n) = 2.0 * u;
    z(n) = q - 1.0;
    z /= (1.0 + q);
    return rot * z;
}

stereo_chart make_north_chart(int n) {
    if (n < 2 || n > 8) throw dimension_out_of_range("sphere dimension out of range");
    stereo_chart ch;
    ch.n = n;
    ch.rot = rmat::Identity(n + 1, n + 1);
    ch.rep = build_rep(n);
    return ch;
}

stereo_chart make_south_chart(int n) {
    stereo_chart ch = make_north_chart(n);
    ch.rot(n - 1, n - 1) = -1.0;
    ch.rot(n, n) = -1.0;
    return ch;
}

stereo_chart make_rotated_chart(int n, int i, int j, double angle) {
    stereo_chart ch = make_north_chart(n);
    if (i < 0 || j < 0 || i >= n || j >= n || i == j)
        throw std::invalid_argument("rotation plane must use two distinct chart axes");
    double c = std::cos(angle), s = std::sin(angle);
    ch.rot(i, i) = c;
    ch.rot(j, j) = c;
    ch.rot(i, j) = -s;
    ch.rot(j, i) = s;
    return ch;
}

cmat rotation_spinor_lift(const clifford_rep& rep, int i, int j, double angle) {
    return std::cos(angle / 2) * cmat::Identity(rep.N, rep.N)
           + std::sin(angle / 2) * rep.gamma[i] * rep.gamma[j];
}

rvec north_south_transition(const rvec& u) {
    double q = u.squaredNorm();
    if (q < kPoleTol) throw pole_in_chart("transition undefined at the origin");
    rvec m = u;
    m(u.size() - 1) = -m(u.size() - 1);
    return m / q;
}

cmat north_south_transport(const clifford_rep& rep, const rvec& u) {
    rvec en = rvec::Zero(rep.n);
    en(rep.n - 1) = 1.0;
    return rep.g(en) * rep.g(u / u.norm());
}

cmat green_sphere_chart(const stereo_chart& ch, const rvec& u, const rvec& v) {
    return std::pow(ch.factor(v), 1.0 - ch.n) * green_euclidean(ch.rep, u, v);
}

cmat green_sphere(const stereo_chart& ch, const rvec& x, const rvec& y) {
    return green_sphere_chart(ch, ch.to_chart(x), ch.to_chart(y));
}

rp_geometry make_rp_geometry(int k, int sign) {
    if (k != 0) throw dimension_out_of_range("only k = 0 (RP^3) is supported");
    if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +-1");
    rp_geometry g;
    g.k = k;
    g.n = 4 * k + 3;
    g.sign = sign;
    g.chart = make_north_chart(g.n);
    return g;
}

rvec antipodal_chart(const rvec& u) {
    double q = u.squaredNorm();
    if (q < kPoleTol) throw pole_in_chart("antipodal image of the origin is the pole");
    return -u / q;
}

cmat antipodal_transport(const clifford_rep& rep, const rvec& u) {
    return std::pow(u.norm(), rep.n - 1.0) * rep.g(u / u.norm());
}

cmat green_rp(const rp_geometry& geom, const rvec& u, const rvec& v) {
    const clifford_rep& rep = geom.chart.rep;
    if (u.norm() < kPoleTol || v.norm() < kPoleTol)
        throw pole_in_chart("the pole class is not evaluable in a single chart");
    rvec sv = antipodal_chart(v);
    if ((u - v).norm() < kPoleTol || (u - sv).norm() < kPoleTol)
        throw coincident_points("green_rp at a coincident class");
    return green_sphere_chart(geom.chart, u, v)
           + double(geom.sign) * green_sphere_chart(geom.chart, u, sv)
                 * antipodal_transport(rep, v);
}

flat_chart_evaluator rp_flat_evaluator(const rp_geometry& geom, const rvec& v0) {
    if (v0.norm() < kPoleTol) throw pole_in_chart("base point at the pole class");
    flat_chart_evaluator ev;
    ev.n = geom.n;
    ev.rep = geom.chart.rep;
    // nearest singularity of the rescaled kernel: the antipodal image, at
    // |w| = F(v0) |sigma(v0) - v0| = 2/|v0|
    ev.flat_radius = 0.98 * 2.0 / std::max(1.0, v0.norm());
    double f0 = geom.chart.factor(v0);
    rp_geometry g = geom;
    rvec base = v0;
    ev.eval = [g, base, f0](const rvec& w) { return green_rp(g, base + w / f0, base); };
    return ev;
}

flat_chart_evaluator sphere_flat_evaluator(const stereo_chart& ch, const rvec& v0) {
    flat_chart_evaluator ev;
    ev.n = ch.n;
    ev.rep = ch.rep;
    ev.flat_radius = 2.0 / std::max(1.0, v0.norm());
    double f0 = ch.factor(v0);
    stereo_chart c = ch;
    rvec base = v0;
    ev.eval = [c, base, f0](const rvec& w) {
        return green_sphere_chart(c, base + w / f0, base);
    };
    return ev;
}

mass_extraction mass_endo_rp(const rp_geometry& geom, const rvec& v0) {
    return extract_mass(rp_flat_evaluator(geom, v0));
}

cmat rp_mass_closed_form(const rp_geometry& geom, const rvec& v0) {
    const clifford_rep& rep = geom.chart.rep;
    rvec sv = antipodal_chart(v0);
    return omega_k(geom.n - 1) * double(geom.sign) * green_sphere_chart(geom.chart, v0, sv)
           * antipodal_transport(rep, v0);
}

rp_mass_report rp_mass_constant(const mass_extraction& ex, double rel_tol) {
    rp_mass_report r;
    int N = ex.alpha.rows();
    r.c = ex.alpha.trace().real() / N;
    r.residue = (ex.alpha - r.c * cmat::Identity(N, N)).cwiseAbs().maxCoeff();
    r.tolerance_met = r.c != 0 && r.residue <= rel_tol * std::abs(r.c);
    return r;
}

} // namespace spinlab
