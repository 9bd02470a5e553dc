// types.hpp — shared dense-matrix aliases

#pragma once

#include <Eigen/Dense>

#include <complex>

namespace topamp {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr Complex imag_unit{0.0, 1.0};

}  // namespace topamp
