#pragma once
#include <functional>
#include <limits>
#include <stdexcept>

#include "spinlab/clifford.hpp"
#include "spinlab/core/types.hpp"

namespace spinlab {

struct coincident_points : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct denominator_vanishes : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct stencil_leaves_domain : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// volume of the unit k-sphere S^k
double omega_k(int k);

struct model_constants_t {
    int n = 0;
    double omega_nm1 = 0;
    double omega_n = 0;
    double I = 0;  // int_{R^n} f^n,      f(r) = 1/(1+r^2); equals omega_n / 2^n
    double C0 = 0; // int_{R^n} f^{n/2+1};                  equals omega_{n-1} / n
};
// analytic values, cross-checked internally against radial quadrature (1e-10)
model_constants_t model_constants(int n);
double model_I_quadrature(int n);
double model_C0_quadrature(int n);

// G_eucl(x,y) = -(1/omega_{n-1}) gamma(x-y) / |x-y|^n
cmat green_euclidean(const clifford_rep& rep, const rvec& x, const rvec& y);

// phi^{sign}(x) = f^{n/2} (Phi - sign * gamma(x) Phi), satisfying D phi = sign * n f phi
cvec killing_spinor(const clifford_rep& rep, int sign, const cvec& phi, const rvec& x);
cvec killing_dirac(const clifford_rep& rep, int sign, const cvec& phi, const rvec& x);

enum class field_kind { plane_wave, green_column, killing_plus, killing_minus, test_spinor, grid_sampled };

struct spinor_field_t {
    field_kind kind;
    std::function<cvec(const rvec&)> eval;
    std::function<cvec(const rvec&)> dirac; // closed-form D(field) when available
    double mesh_h = 0;                      // grid_sampled only
    double domain_radius = std::numeric_limits<double>::infinity();
};

spinor_field_t make_killing_field(const clifford_rep& rep, int sign, const cvec& phi);
spinor_field_t make_plane_wave(const clifford_rep& rep, const rvec& xi, const cvec& w);
spinor_field_t make_green_column(const clifford_rep& rep, const rvec& y, const cvec& psi0);

// central-difference Sum_k gamma_k d_k field at x; O(h^2) for smooth fields
cvec dirac_fd(const clifford_rep& rep, const spinor_field_t& field, const rvec& x, double h);
// Richardson extrapolation in h^2 over h0/2^j, j = 0..levels-1
cvec dirac_fd_extrapolated(const clifford_rep& rep, const spinor_field_t& field, const rvec& x,
                           double h0 = 0.05, int levels = 4, double* residual = nullptr);

struct quad_scheme {
    int radial_panels = 24;
    int radial_pts = 16;
    double rsplit = 8.0; // 1/r substitution beyond this radius
    int sphere_res = 12;
};

struct functional_report {
    double numerator = 0;   // (int |D psi|^{2n/(n+1)})^{(n+1)/n}
    double denominator = 0; // int Re<D psi, psi>
    double J = 0;
    double target = 0;      // (n/2) omega_n^{1/n}
    bool strict_below = false;
};

// J over R^n by product quadrature; needs field.dirac (closed form). Supported
// for the Killing variants, whose integrands decay like r^{-2n}.
functional_report functional_J(const clifford_rep& rep, const spinor_field_t& field,
                               const quad_scheme& q = {});

} // namespace spinlab
