#pragma once
#include <functional>
#include <vector>
#include "spinlab/core/types.hpp"

namespace spinlab {

struct quad_rule {
    std::vector<double> x, w;
    size_t size() const { return x.size(); }
};

// Gauss-Legendre nodes/weights on [-1,1] (Newton on the Legendre recurrence).
quad_rule gauss_legendre(int npts);

// npanels equal panels on [a,b], each carrying a Gauss-Legendre rule.
quad_rule panel_rule(double a, double b, int npanels, int pts_per_panel);

// panels with prescribed breakpoints (edges must be increasing)
quad_rule panel_rule_edges(const std::vector<double>& edges, int pts_per_panel);

// Quadrature points on the unit sphere S^{n-1}, n in {2,3}:
//  n=2: uniform circle rule (trapezoidal, spectrally accurate),
//  n=3: Gauss-Legendre in cos(theta) x uniform in phi (product rule).
// Weights sum to the sphere volume omega_{n-1}.
struct sphere_rule {
    std::vector<rvec> dir;
    std::vector<double> w;
    size_t size() const { return dir.size(); }
};
sphere_rule sphere_quadrature(int n, int resolution);

// integral over [0, inf) of g, split at rsplit: panels on [0,rsplit] plus an
// inverted-variable tail (u = 1/r) so algebraic decay is handled exactly.
double integrate_halfline(const std::function<double(double)>& g, double rsplit,
                          int npanels, int pts_per_panel);

} // namespace spinlab
