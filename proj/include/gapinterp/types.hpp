#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace gapinterp {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;

}  // namespace gapinterp
