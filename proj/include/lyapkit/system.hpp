// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LYAPKIT_SYSTEM_HPP
#define LYAPKIT_SYSTEM_HPP

#include <optional>

#include "lyapkit/types.hpp"

namespace lyapkit
{

//
// Large-scale descriptor system  E x' = A x + B u,  y = C x  with sparse (E, A) and dense
// tall-skinny B (n x m) and wide C (p x n, optional).
//
struct SparseSystem
{
  SparseMatrix E;
  SparseMatrix A;
  Matrix B;
  std::optional<Matrix> C;

  Index order() const { return A.rows(); }
  Index inputs() const { return B.cols(); }
  Index outputs() const { return C ? C->rows() : 0; }

  // Throws DimensionMismatch / InvalidArgument on inconsistent shapes or non-finite data.
  void validate() const;
};

SparseSystem make_system(SparseMatrix E, SparseMatrix A, Matrix B,
                         std::optional<Matrix> C = std::nullopt);

// Standard state-space form with E = I.
SparseSystem make_standard_system(SparseMatrix A, Matrix B,
                                  std::optional<Matrix> C = std::nullopt);

SparseMatrix sparse_identity(Index n);

// Small dense real realization (E, A, B, C); used for reduced models and H2 computations.
struct DenseSystem
{
  Matrix E;
  Matrix A;
  Matrix B;
  Matrix C;

  Index order() const { return A.rows(); }
  Index inputs() const { return B.cols(); }
  Index outputs() const { return C.rows(); }

  void validate() const;
};

DenseSystem to_dense(const SparseSystem &sys);
SparseSystem to_sparse(const DenseSystem &sys);

}  // namespace lyapkit

#endif  // LYAPKIT_SYSTEM_HPP
