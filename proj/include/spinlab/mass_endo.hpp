#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinlab/clifford.hpp"
#include "spinlab/euclid.hpp"

namespace spinlab {

struct non_convergent : std::runtime_error {
    double residual;
    explicit non_convergent(double r)
        : std::runtime_error("mass extraction did not converge, residual " + std::to_string(r)),
          residual(r) {}
};

struct chart_not_flat : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct hermitian_defect_too_large : std::runtime_error {
    double defect;
    explicit hermitian_defect_too_large(double d)
        : std::runtime_error("Hermitian defect " + std::to_string(d) + " above tolerance"),
          defect(d) {}
};

// Green evaluator in a flat-rescaled chart centered at the extraction point:
// eval(w) = -(1/omega_{n-1}) gamma(w)/|w|^n + (1/omega_{n-1}) v(w) with v smooth
// on |w| < flat_radius and the chart metric flat there with unit factor at w = 0.
struct flat_chart_evaluator {
    int n = 0;
    clifford_rep rep;
    double flat_radius = 0;
    std::function<cmat(const rvec&)> eval;
};

struct mass_extraction {
    cmat alpha;
    double residual;         // extrapolation error estimate
    std::vector<double> radii;
    std::vector<rvec> directions;
    double hermitian_defect; // ||alpha - alpha*||_max
};

// alpha = lim_{w->0} [omega_{n-1} G(w) + gamma(w)/|w|^n]: average the bracket
// over an antipodal-closed direction set (kills odd terms of v), then
// Richardson-extrapolate in r^2 over a decreasing radius list.
// Defaults: radii r0 * 2^{-k}, k = 0..5 with r0 = flat_radius/3; directions
// = +-coordinate axes.
mass_extraction extract_mass(const flat_chart_evaluator& ev, std::vector<double> radii = {},
                             std::vector<rvec> directions = {}, double tolerance = 1e-6);

// v1(x,x) = f^{1-n} v2(x,x) under a conformal factor equal to f at the point
cmat conformal_rescale_mass(const cmat& alpha, double f_at_y, int n);

struct mass_spectrum_report {
    std::vector<double> eigenvalues; // ascending, of the Hermitized alpha
    double hermitian_defect;
    bool nu_supplied = false;
    double nu_anticommutator = 0;  // ||nu alpha + alpha nu|| (operator composition)
    bool symmetric_spectrum = true;
};

// Hermitize (alpha + alpha*)/2, record the defect, return the real spectrum;
// when nu is supplied assert the multiset is symmetric under negation and
// report the anticommutator norm.
mass_spectrum_report mass_spectrum(const cmat& alpha, const symmetry_automorphism* nu = nullptr,
                                   double tolerance = 1e-8, double defect_tolerance = 1e-6);

// ||Q alpha - alpha Q|| for a conjugate-linear quaternionic structure
double q_mass_commutator(const quaternionic_structure& q, const cmat& alpha);

} // namespace spinlab
