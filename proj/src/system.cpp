// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "lyapkit/system.hpp"

#include "lyapkit/error.hpp"

namespace lyapkit
{

namespace
{

bool sparse_finite(const SparseMatrix &M)
{
  for (Index j = 0; j < M.outerSize(); j++)
  {
    for (SparseMatrix::InnerIterator it(M, j); it; ++it)
    {
      if (!std::isfinite(it.value()))
      {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

void SparseSystem::validate() const
{
  const Index n = A.rows();
  require(n > 0 && A.cols() == n, ErrorKind::DimensionMismatch, "A must be square, n > 0");
  require(E.rows() == n && E.cols() == n, ErrorKind::DimensionMismatch, "E must be n x n");
  require(B.rows() == n && B.cols() >= 1, ErrorKind::DimensionMismatch,
          "B must be n x m with m >= 1");
  require(!C || (C->cols() == n && C->rows() >= 1), ErrorKind::DimensionMismatch,
          "C must be p x n");
  require(sparse_finite(A) && sparse_finite(E) && B.allFinite() && (!C || C->allFinite()),
          ErrorKind::InvalidArgument, "system matrices must be finite");
}

SparseSystem make_system(SparseMatrix E, SparseMatrix A, Matrix B, std::optional<Matrix> C)
{
  E.makeCompressed();
  A.makeCompressed();
  SparseSystem sys{std::move(E), std::move(A), std::move(B), std::move(C)};
  sys.validate();
  return sys;
}

SparseMatrix sparse_identity(Index n)
{
  SparseMatrix I(n, n);
  I.setIdentity();
  I.makeCompressed();
  return I;
}

SparseSystem make_standard_system(SparseMatrix A, Matrix B, std::optional<Matrix> C)
{
  const Index n = A.rows();
  return make_system(sparse_identity(n), std::move(A), std::move(B), std::move(C));
}

void DenseSystem::validate() const
{
  const Index q = A.rows();
  require(A.cols() == q && E.rows() == q && E.cols() == q, ErrorKind::DimensionMismatch,
          "dense system: A and E must be square of equal order");
  require(B.rows() == q && C.cols() == q, ErrorKind::DimensionMismatch,
          "dense system: B must be q x m and C p x q");
  require(A.allFinite() && E.allFinite() && B.allFinite() && C.allFinite(),
          ErrorKind::InvalidArgument, "dense system: non-finite entries");
}

DenseSystem to_dense(const SparseSystem &sys)
{
  require(sys.C.has_value(), ErrorKind::InvalidArgument, "system has no output matrix C");
  return DenseSystem{Matrix(sys.E), Matrix(sys.A), sys.B, *sys.C};
}

SparseSystem to_sparse(const DenseSystem &sys)
{
  sys.validate();
  return make_system(sys.E.sparseView(0.0, 0.0), sys.A.sparseView(0.0, 0.0), sys.B, sys.C);
}

}  // namespace lyapkit
