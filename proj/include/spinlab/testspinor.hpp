#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "spinlab/euclid.hpp"
#include "spinlab/sphere_rp.hpp"
#include "spinlab/torus.hpp"

namespace spinlab {

struct continuity_violation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct expansion_data_missing : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct denominator_wrong_sign : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct zero_mass_endomorphism : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// harmonic data around the base point in the flat-rescaled chart:
// psi(w) = gamma(w) psi0 / |w|^n + psi1 + theta(w) with D psi = 0, theta = O(|w|)
struct harmonic_source {
    std::function<cvec(const rvec&)> psi;
    std::function<cvec(const rvec&)> theta;
};

struct test_spinor_params {
    int n = 3;
    double epsilon = 0;
    double q = 0.25; // cutoff exponent, xi = epsilon^q
    cvec psi0, psi1;
    harmonic_source source;
    double chart_radius = 2.0; // the 2 xi ball must stay inside

    double xi() const { return std::pow(epsilon, q); }
    // eps0 = xi^n/eps * f(xi/eps)^{n/2} ~ eps^{n-1}
    double eps0() const;
};

// validates: q in ((n-1)/(n(n+1)), 1/n), psi0 normalized to 1, 2 xi inside the
// chart, eps0/eps^{n-1} in [0.5, 2]; throws expansion_data_missing without a source
test_spinor_params make_test_spinor_params(int n, double epsilon, double q, const cvec& psi0,
                                           const cvec& psi1, harmonic_source source,
                                           double chart_radius = 2.0);

// C^1 monotone smoothstep cutoff: 1 on [0, xi], 0 on [2 xi, inf), |eta'| <= 1.5/xi
double eta_cutoff(double r, double xi);
double eta_cutoff_derivative(double r, double xi);

// the piecewise field psi_eps^{sign} and its closed-form Dirac derivative
struct test_spinor_field {
    test_spinor_params params;
    int sign = +1;
    int region(double r) const; // 0 inner (r < xi), 1 middle, 2 outer (r >= 2 xi)
    cvec value(const rvec& x) const;
    cvec dirac(const rvec& x) const; // identically 0 in the outer region
};

// checks continuity across both interfaces at sampled directions (1e-10 rel)
test_spinor_field build_test_spinor(const test_spinor_params& p, int sign);

struct quadrature_resolution {
    int radial_pts = 24;   // Gauss-Legendre points per radial panel
    int inner_panels = 24; // on [0, min(8 eps, xi)]
    int tail_panels = 16;  // on [8 eps, xi] when 8 eps < xi
    int middle_panels = 24;
    int sphere_res = 12; // n=3: 12 x 24 product rule
};

struct expansion_prediction {
    double num_leading; // n^2 I^{(n+1)/n}: numerator / eps^{n-1} -> this
    double den_leading; // n I: denominator / eps^{n-1} -> this
    double c0;          // C_0, the coefficient of -+ Re(nu_pair) eps^{n-1}
    double nu_pair_re;  // Re<psi0, psi1>
};

struct test_functional_report {
    double numerator;   // (int |D psi|^{2n/(n+1)})^{(n+1)/n}
    double denominator; // int Re<D psi, psi>
    double J;           // numerator / denominator
    double target;      // (n/2) omega_n^{1/n}
    bool strict_below;  // sign +: J < target; sign -: -J < target
    double num_middle;  // middle-region share of int |D psi|^{2n/(n+1)} (raw)
    double den_middle;  // middle-region share of the denominator
    expansion_prediction prediction;
};

test_functional_report evaluate_test_functional(const test_spinor_field& f,
                                                const quadrature_resolution& res = {});

// ---- verdicts ----

enum class verdict_kind { strict_below, not_below, inconclusive };

struct verdict_row {
    double epsilon;
    double numerator, denominator, J, target;
    bool strict_below;
};

struct yamabe_verdict_result {
    int sign = 0;               // functional sign dictated by the mass eigenvalue
    double mass_eigenvalue = 0; // c
    double nu_pair_re = 0;      // Re<psi0, psi1> = -c on the Green route
    std::vector<verdict_row> rows;
    verdict_kind verdict = verdict_kind::inconclusive; // at the smallest epsilon
};

// default schedule {0.1, 0.05, 0.025, 0.0125} when eps_list is empty
yamabe_verdict_result yamabe_verdict_rp(const rp_geometry& geom, const rvec& p,
                                        std::vector<double> eps_list = {},
                                        const quadrature_resolution& res = {});

// flat tori have vanishing mass endomorphism: throws zero_mass_endomorphism
// after verifying the extraction at p (trivial structures are rejected earlier
// by the Green evaluator)
yamabe_verdict_result yamabe_verdict_torus(const torus_geometry& geom, const spin_structure& spin,
                                           const rvec& p);

// synthetic flat harness: theta = 0, psi = gamma(x) psi0/|x|^n + psi1 with
// psi1 = nu_pair * psi0 real; Re(nu_pair) = 0 yields an inconclusive verdict
yamabe_verdict_result yamabe_verdict_synthetic(int n, double nu_pair,
                                               std::vector<double> eps_list = {},
                                               const quadrature_resolution& res = {});

harmonic_source synthetic_flat_source(const clifford_rep& rep, const cvec& psi0, const cvec& psi1);

// psi(w) = -omega_{n-1} G_RP(. , p) psi0 in the flat-rescaled chart at p, with
// theta = psi - gamma(w) psi0/|w|^n - psi1
harmonic_source rp_harmonic_source(const rp_geometry& geom, const rvec& p, const cvec& psi0,
                                   const cvec& psi1);

} // namespace spinlab
