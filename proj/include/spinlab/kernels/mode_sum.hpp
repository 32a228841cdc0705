#pragma once
#include <vector>

#include "spinlab/core/types.hpp"

namespace spinlab {

// one dual-lattice row: xi(m) = xi0 + m*b1 for m = 0..count-1 (first n slots used);
// rows never contain the zero mode (callers enumerate against nontrivial shifts)
struct mode_row {
    int n = 0;
    int count = 0;
    double xi0[3] = {0, 0, 0};
    double b1[3] = {0, 0, 0};
};

// writes S_k(row) = sum_m xi_k(m) e^{-s|xi(m)|^2} e^{2 pi i xi(m).d} / |xi(m)|^2
// into out[0..n-1]
using mode_sum_fn = void (*)(const mode_row& row, double s, const double* d, cplx* out);

// reference: independent exp/sincos per mode, no recurrences
void mode_sum_row_scalar(const mode_row& row, double s, const double* d, cplx* out);

struct kernel_entry {
    const char* name;
    mode_sum_fn fn;
};

// scalar first, then any SIMD variant usable on this CPU
const std::vector<kernel_entry>& available_mode_sum_kernels();
// fastest available variant (last table entry)
kernel_entry select_mode_sum_kernel();

} // namespace spinlab
