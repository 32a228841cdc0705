#pragma once
#include <cmath>
#include <vector>
#include "spinlab/core/types.hpp"

namespace spinlab {

// Neumaier variant of Kahan summation: exact enough that a fixed summation
// order gives bit-reproducible reductions regardless of how partial sums
// were produced.
struct compensated_sum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

struct compensated_csum {
    compensated_sum re, im;
    void add(cplx z) { re.add(z.real()); im.add(z.imag()); }
    cplx value() const { return {re.value(), im.value()}; }
};

// entrywise compensated accumulator for small dense complex matrices
struct compensated_msum {
    std::vector<compensated_csum> acc;
    Eigen::Index rows = 0, cols = 0;
    explicit compensated_msum(Eigen::Index r, Eigen::Index c)
        : acc(static_cast<size_t>(r * c)), rows(r), cols(c) {}
    void add(const cmat& m) {
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i)
                acc[static_cast<size_t>(j * rows + i)].add(m(i, j));
    }
    cmat value() const {
        cmat out(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i)
                out(i, j) = acc[static_cast<size_t>(j * rows + i)].value();
        return out;
    }
};

} // namespace spinlab
