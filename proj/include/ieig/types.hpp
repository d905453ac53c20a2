#pragma once

#include <complex>

#include <Eigen/Core>

namespace ieig {

/// Every solve runs in complex arithmetic; real inputs are promoted on entry.
using Scalar = std::complex<double>;
using Vector = Eigen::VectorXcd;
using DenseMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

inline constexpr double machine_eps = 2.220446049250313e-16;

}  // namespace ieig
