#pragma once
#include <complex>
#include <Eigen/Dense>

namespace spinlab {

using cplx = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;
using rvec = Eigen::VectorXd;
using rmat = Eigen::MatrixXd;

inline constexpr double pi = 3.14159265358979323846264338327950288;

} // namespace spinlab
