// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LYAPKIT_TYPES_HPP
#define LYAPKIT_TYPES_HPP

#include <complex>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace lyapkit
{

using Complex = std::complex<double>;

using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;
using CSparseMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

using Index = Eigen::Index;

// Relative tolerances shared across modules. Individual operations accept overrides.
struct Tolerances
{
  static constexpr double solve = 1.0e-10;
  static constexpr double drop = 1.0e-12;
  static constexpr double krylov_drop = 1.0e-10;
  static constexpr double adi_residual = 1.0e-8;
  static constexpr double imag_zero = 1.0e-12;
};

inline CMatrix to_complex(const Matrix &m) { return m.cast<Complex>(); }

// Largest imaginary-part magnitude relative to the largest entry magnitude.
inline double relative_imag(const CMatrix &m)
{
  const double scale = m.cwiseAbs().maxCoeff();
  if (m.size() == 0 || scale == 0.0)
  {
    return 0.0;
  }
  return m.imag().cwiseAbs().maxCoeff() / scale;
}

inline bool all_finite(const Matrix &m) { return m.allFinite(); }
inline bool all_finite(const CMatrix &m)
{
  return m.real().allFinite() && m.imag().allFinite();
}

}  // namespace lyapkit

#endif  // LYAPKIT_TYPES_HPP
