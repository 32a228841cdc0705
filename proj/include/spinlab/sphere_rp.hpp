#pragma once

#include <stdexcept>

#include "spinlab/clifford.hpp"
#include "spinlab/euclid.hpp"
#include "spinlab/mass_endo.hpp"

namespace spinlab {

struct pole_in_chart : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Stereographic chart of S^n c R^{n+1}. Chart frame z = rot^T x, coordinates
// u = (z_1..z_n)/(1 - z_{n+1}); the excluded pole is rot e_{n+1}. Round metric
// in the chart: F(u)^2 g_eucl with F(u) = 2/(1+|u|^2).
struct stereo_chart {
    int n = 0;
    rmat rot; // (n+1)x(n+1) orthogonal
    clifford_rep rep;

    rvec pole() const { return rot.col(n); }
    rvec to_chart(const rvec& x) const;   // throws pole_in_chart near the pole
    rvec from_chart(const rvec& u) const; // always lands on S^n minus the pole
    double factor(const rvec& u) const { return 2.0 / (1.0 + u.squaredNorm()); }
};

stereo_chart make_north_chart(int n);
stereo_chart make_south_chart(int n); // frame flips z_n and z_{n+1}: transition stays in Spin
// north chart precomposed with the ambient rotation by `angle` in the (i,j)
// coordinate plane, i,j < n (the pole is fixed; the chart frame rotates)
stereo_chart make_rotated_chart(int n, int i, int j, double angle);

// spin lift of the in-chart rotation by angle in the (i,j) plane
cmat rotation_spinor_lift(const clifford_rep& rep, int i, int j, double angle);
// north<->south transition m(u) = (u - 2 u_n e_n)/|u|^2 and its spinor
// transport U(u) = gamma(e_n) gamma(u/|u|):
//   K_south(m(u), m(v)) = |u|^{n-1} |v|^{1-n} U(u) K_north(u, v) U(v)^{-1}
rvec north_south_transition(const rvec& u);
cmat north_south_transport(const clifford_rep& rep, const rvec& u);

// sphere Green kernel in the chart trivialization:
// K(u,v) = F(v)^{1-n} G_eucl(u,v). Ambient-point and chart-coordinate forms.
cmat green_sphere(const stereo_chart& ch, const rvec& x, const rvec& y);
cmat green_sphere_chart(const stereo_chart& ch, const rvec& u, const rvec& v);

// ---- real projective space RP^{4k+3} (desk scale k = 0: RP^3) ----

struct rp_geometry {
    int k = 0;
    int n = 3;     // 4k+3
    int sign = +1; // +1 -> sigma_+, -1 -> sigma_- (labels fixed by sign(c))
    stereo_chart chart;
};
rp_geometry make_rp_geometry(int k, int sign);

// antipodal map in chart coordinates and its spinor transport J(u), J o J = Id
rvec antipodal_chart(const rvec& u);
cmat antipodal_transport(const clifford_rep& rep, const rvec& u);

// covering sum K(u,v) = K_S(u,v) + sign K_S(u, sigma(v)) J(v) in the fixed
// chart. Preconditions: u,v nonzero chart lifts (the pole class {0, infinity}
// is not evaluable in one chart), u != v and u != sigma(v) mod identification.
cmat green_rp(const rp_geometry& geom, const rvec& u, const rvec& v);

// flat-rescaled evaluators centered at chart point v0: w = F(v0)(u - v0).
// The direct term becomes exactly the Euclidean kernel in w, so the regular
// part feeding the mass extraction is the (smooth) antipodal term alone.
flat_chart_evaluator rp_flat_evaluator(const rp_geometry& geom, const rvec& v0);
flat_chart_evaluator sphere_flat_evaluator(const stereo_chart& ch, const rvec& v0);

// mass endomorphism of RP^{4k+3} at the class of chart point v0
mass_extraction mass_endo_rp(const rp_geometry& geom, const rvec& v0);
// closed-form oracle: the antipodal term evaluated at the base point,
// alpha = omega_{n-1} sign K_S(v0, sigma(v0)) J(v0) (= sign 2^{1-n} Id)
cmat rp_mass_closed_form(const rp_geometry& geom, const rvec& v0);

struct rp_mass_report {
    double c;        // real multiple of the identity
    double residue;  // ||alpha - c Id||_max
    bool tolerance_met;
};
rp_mass_report rp_mass_constant(const mass_extraction& ex, double rel_tol = 1e-4);

} // namespace spinlab
