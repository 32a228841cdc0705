#pragma once
#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>
#include "spinlab/core/types.hpp"

namespace spinlab {

// Neville polynomial extrapolation to t = 0 of samples (t_i, v_i).
// residual = |last diagonal entry - previous one|, the usual a-posteriori
// estimate for Richardson tables.
inline double neville_scalar(const std::vector<double>& t,
                             const std::vector<double>& vals,
                             double* residual = nullptr) {
    const size_t m = t.size();
    assert(vals.size() == m && m >= 1);
    std::vector<double> v = vals;
    double last = v[0], prev_last = v[0];
    for (size_t k = 1; k < m; ++k) {
        for (size_t i = 0; i + k < m; ++i)
            v[i] = v[i + 1] + (v[i + 1] - v[i]) * (t[i + k] / (t[i] - t[i + k]));
        prev_last = last;
        last = v[0];
    }
    if (residual) *residual = (m >= 2) ? std::abs(last - prev_last) : 0.0;
    return last;
}

inline cmat neville_matrix(const std::vector<double>& t,
                           const std::vector<cmat>& vals,
                           double* residual = nullptr) {
    const size_t m = t.size();
    assert(vals.size() == m && m >= 1);
    std::vector<cmat> v = vals;
    cmat last = v[0], prev_last = v[0];
    for (size_t k = 1; k < m; ++k) {
        for (size_t i = 0; i + k < m; ++i)
            v[i] = v[i + 1] + (t[i + k] / (t[i] - t[i + k])) * (v[i + 1] - v[i]);
        prev_last = last;
        last = v[0];
    }
    if (residual) *residual = (m >= 2) ? (last - prev_last).norm() : 0.0;
    return last;
}

} // namespace spinlab
