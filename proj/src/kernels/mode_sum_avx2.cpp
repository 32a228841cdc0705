#include "spinlab/kernels/mode_sum.hpp"

#if defined(SPINLAB_BUILD_AVX2)

#include <immintrin.h>

#include <cmath>

namespace spinlab {

// 4-wide FMA variant. Per-row closed forms:
//   |xi(m)|^2 = a + b m + c m^2,  xi(m).d = p + q m
// Gaussian weights advance by the double geometric recurrence
//   g(m+4) = g(m) rho(m),  rho(m+4) = rho(m) exp(-32 s c)
// and phases by the single recurrence z(m+4) = z(m) e^{8 pi i q}.
void mode_sum_row_avx2(const mode_row& row, double s, const double* d, cplx* out) {
    const int n = row.n;
    double a = 0, b = 0, c = 0, p = 0, q = 0;
    for (int k = 0; k < n; ++k) {
        a += row.xi0[k] * row.xi0[k];
        b += 2.0 * row.xi0[k] * row.b1[k];
        c += row.b1[k] * row.b1[k];
        p += row.xi0[k] * d[k];
        q += row.b1[k] * d[k];
    }

    alignas(32) double seed_g[4], seed_rho[4], seed_zr[4], seed_zi[4], seed_m[4];
    for (int l = 0; l < 4; ++l) {
        double m = l;
        seed_m[l] = m;
        seed_g[l] = std::exp(-s * (a + m * (b + c * m)));
        seed_rho[l] = std::exp(-s * (4.0 * b + 8.0 * c * m + 16.0 * c));
        seed_zr[l] = std::cos(2.0 * pi * (p + q * m));
        seed_zi[l] = std::sin(2.0 * pi * (p + q * m));
    }
    __m256d g = _mm256_load_pd(seed_g);
    __m256d rho = _mm256_load_pd(seed_rho);
    __m256d zr = _mm256_load_pd(seed_zr);
    __m256d zi = _mm256_load_pd(seed_zi);
    __m256d mv = _mm256_load_pd(seed_m);
    const __m256d rho_step = _mm256_set1_pd(std::exp(-32.0 * s * c));
    const __m256d zsr = _mm256_set1_pd(std::cos(8.0 * pi * q));
    const __m256d zsi = _mm256_set1_pd(std::sin(8.0 * pi * q));
    const __m256d av = _mm256_set1_pd(a), bv = _mm256_set1_pd(b), cv = _mm256_set1_pd(c);
    const __m256d four = _mm256_set1_pd(4.0);

    __m256d acc_re[3], acc_im[3];
    for (int k = 0; k < n; ++k) acc_re[k] = acc_im[k] = _mm256_setzero_pd();

    const int blocks = row.count / 4;
    for (int blk = 0; blk < blocks; ++blk) {
        // q2 = a + m(b + c m), winv = g / q2
        __m256d q2 = _mm256_add_pd(av, _mm256_mul_pd(mv, _mm256_fmadd_pd(cv, mv, bv)));
        __m256d winv = _mm256_div_pd(g, q2);
        __m256d wr = _mm256_mul_pd(winv, zr);
        __m256d wi = _mm256_mul_pd(winv, zi);
        for (int k = 0; k < n; ++k) {
            __m256d xik = _mm256_fmadd_pd(mv, _mm256_set1_pd(row.b1[k]),
                                          _mm256_set1_pd(row.xi0[k]));
            acc_re[k] = _mm256_fmadd_pd(xik, wr, acc_re[k]);
            acc_im[k] = _mm256_fmadd_pd(xik, wi, acc_im[k]);
        }
        g = _mm256_mul_pd(g, rho);
        rho = _mm256_mul_pd(rho, rho_step);
        __m256d nzr = _mm256_fmsub_pd(zr, zsr, _mm256_mul_pd(zi, zsi));
        __m256d nzi = _mm256_fmadd_pd(zr, zsi, _mm256_mul_pd(zi, zsr));
        zr = nzr;
        zi = nzi;
        mv = _mm256_add_pd(mv, four);
    }

    alignas(32) double lane[4];
    for (int k = 0; k < n; ++k) {
        double re = 0, im = 0;
        _mm256_store_pd(lane, acc_re[k]);
        for (int l = 0; l < 4; ++l) re += lane[l];
        _mm256_store_pd(lane, acc_im[k]);
        for (int l = 0; l < 4; ++l) im += lane[l];
        out[k] = cplx(re, im);
    }

    // remainder modes, evaluated directly
    for (int m = blocks * 4; m < row.count; ++m) {
        double xi[3], q2 = 0, ph = 0;
        for (int k = 0; k < n; ++k) {
            xi[k] = row.xi0[k] + m * row.b1[k];
            q2 += xi[k] * xi[k];
            ph += xi[k] * d[k];
        }
        double w = std::exp(-s * q2) / q2;
        cplx z = w * cplx(std::cos(2.0 * pi * ph), std::sin(2.0 * pi * ph));
        for (int k = 0; k < n; ++k) out[k] += xi[k] * z;
    }
}

} // namespace spinlab

#endif // SPINLAB_BUILD_AVX2
