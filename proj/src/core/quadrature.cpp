#include "spinlab/core/quadrature.hpp"
#include <cmath>

namespace spinlab {

quad_rule gauss_legendre(int npts) {
    quad_rule r;
    r.x.resize(npts);
    r.w.resize(npts);
    const int m = (npts + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n
        double z = std::cos(pi * (i + 0.75) / (npts + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < npts; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = npts * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        r.x[i] = -z;
        r.x[npts - 1 - i] = z;
        r.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        r.w[npts - 1 - i] = r.w[i];
    }
    return r;
}

quad_rule panel_rule(double a, double b, int npanels, int pts_per_panel) {
    std::vector<double> edges(npanels + 1);
    for (int i = 0; i <= npanels; ++i)
        edges[i] = a + (b - a) * i / npanels;
    return panel_rule_edges(edges, pts_per_panel);
}

quad_rule panel_rule_edges(const std::vector<double>& edges, int pts_per_panel) {
    quad_rule gl = gauss_legendre(pts_per_panel);
    quad_rule r;
    for (size_t p = 0; p + 1 < edges.size(); ++p) {
        double c = 0.5 * (edges[p] + edges[p + 1]);
        double h = 0.5 * (edges[p + 1] - edges[p]);
        for (size_t i = 0; i < gl.size(); ++i) {
            r.x.push_back(c + h * gl.x[i]);
            r.w.push_back(h * gl.w[i]);
        }
    }
    return r;
}

sphere_rule sphere_quadrature(int n, int resolution) {
    sphere_rule s;
    if (n == 2) {
        const int m = 4 * resolution;
        for (int j = 0; j < m; ++j) {
            double phi = 2.0 * pi * j / m;
            rvec d(2);
            d << std::cos(phi), std::sin(phi);
            s.dir.push_back(d);
            s.w.push_back(2.0 * pi / m);
        }
    } else if (n == 3) {
        const int nt = resolution, np = 2 * resolution;
        quad_rule gl = gauss_legendre(nt);
        for (int i = 0; i < nt; ++i) {
            double ct = gl.x[i], st = std::sqrt(1.0 - ct * ct);
            for (int j = 0; j < np; ++j) {
                double phi = 2.0 * pi * j / np;
                rvec d(3);
                d << st * std::cos(phi), st * std::sin(phi), ct;
                s.dir.push_back(d);
                s.w.push_back(gl.w[i] * 2.0 * pi / np);
            }
        }
    }
    return s;
}

double integrate_halfline(const std::function<double(double)>& g, double rsplit,
                          int npanels, int pts_per_panel) {
    quad_rule head = panel_rule(0.0, rsplit, npanels, pts_per_panel);
    double acc = 0.0;
    for (size_t i = 0; i < head.size(); ++i)
        acc += head.w[i] * g(head.x[i]);
    // tail: int_{rsplit}^inf g(r) dr = int_0^{1/rsplit} g(1/u)/u^2 du
    quad_rule tail = panel_rule(0.0, 1.0 / rsplit, npanels, pts_per_panel);
    for (size_t i = 0; i < tail.size(); ++i) {
        double u = tail.x[i];
        acc += tail.w[i] * g(1.0 / u) / (u * u);
    }
    return acc;
}

} // namespace spinlab
