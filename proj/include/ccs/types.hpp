#pragma once

#include <complex>

#include <Eigen/Dense>

namespace ccs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

}  // namespace ccs
