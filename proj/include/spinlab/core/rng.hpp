#pragma once
#include <random>
#include "spinlab/core/types.hpp"

namespace spinlab {

// Seeded, portable randomness for tests and sampling (mt19937_64 is
// bit-stable across platforms, unlike distributions in some stdlibs, so we
// only draw through the uniform helpers below).
struct rng {
    std::mt19937_64 eng;
    explicit rng(uint64_t seed) : eng(seed) {}

    double uniform(double a, double b) {
        // 53-bit mantissa draw, deterministic across stdlib implementations
        uint64_t u = eng() >> 11;
        double x = static_cast<double>(u) * (1.0 / 9007199254740992.0);
        return a + (b - a) * x;
    }

    rvec point(int n, double a, double b) {
        rvec p(n);
        for (int i = 0; i < n; ++i) p(i) = uniform(a, b);
        return p;
    }

    rvec direction(int n) {
        // Box-Muller on uniform draws, then normalize
        rvec p(n);
        for (int i = 0; i < n; ++i) {
            double u1 = uniform(1e-12, 1.0), u2 = uniform(0.0, 1.0);
            p(i) = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
        }
        return p / p.norm();
    }

    cvec spinor(int N, bool normalize = true) {
        cvec v(N);
        for (int i = 0; i < N; ++i)
            v(i) = cplx(uniform(-1.0, 1.0), uniform(-1.0, 1.0));
        if (normalize) v /= v.norm();
        return v;
    }
};

} // namespace spinlab
