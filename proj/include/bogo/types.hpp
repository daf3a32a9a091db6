#pragma once

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace bogo {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using SparseOp = Eigen::SparseMatrix<cplx, Eigen::RowMajor, int>;

inline constexpr cplx kI{0.0, 1.0};

}  // namespace bogo
