#include <cmath>

#include "spinlab/kernels/mode_sum.hpp"

namespace spinlab {

void mode_sum_row_scalar(const mode_row& row, double s, const double* d, cplx* out) {
    const int n = row.n;
    double acc_re[3] = {0, 0, 0}, acc_im[3] = {0, 0, 0};
    for (int m = 0; m < row.count; ++m) {
        double xi[3], q2 = 0, ph = 0;
        for (int k = 0; k < n; ++k) {
            xi[k] = row.xi0[k] + m * row.b1[k];
            q2 += xi[k] * xi[k];
            ph += xi[k] * d[k];
        }
        double w = std::exp(-s * q2) / q2;
        double c = std::cos(2.0 * pi * ph), si = std::sin(2.0 * pi * ph);
        for (int k = 0; k < n; ++k) {
            acc_re[k] += xi[k] * w * c;
            acc_im[k] += xi[k] * w * si;
        }
    }
    for (int k = 0; k < n; ++k) out[k] = cplx(acc_re[k], acc_im[k]);
}

} // namespace spinlab
