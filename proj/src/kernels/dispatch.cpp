#include "spinlab/kernels/mode_sum.hpp"

namespace spinlab {

#if defined(SPINLAB_BUILD_AVX2)
void mode_sum_row_avx2(const mode_row& row, double s, const double* d, cplx* out);
#endif

const std::vector<kernel_entry>& available_mode_sum_kernels() {
    static const std::vector<kernel_entry> table = [] {
        std::vector<kernel_entry> t;
        t.push_back({"scalar", &mode_sum_row_scalar});
#if defined(SPINLAB_BUILD_AVX2)
        if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
            t.push_back({"avx2", &mode_sum_row_avx2});
#endif
        return t;
    }();
    return table;
}

kernel_entry select_mode_sum_kernel() { return available_mode_sum_kernels().back(); }

} // namespace spinlab
