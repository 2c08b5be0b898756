// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LYAPKIT_LINALG_HPP
#define LYAPKIT_LINALG_HPP

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/SparseLU>

#include "lyapkit/error.hpp"
#include "lyapkit/types.hpp"

namespace lyapkit
{

//
// Sparse LU factorization of the shifted pencil (A - shift * E). Real shifts are factored in
// real arithmetic; complex right-hand sides are then solved as two real systems. The handle
// is read-only after construction and may be shared between threads.
//
class ShiftedFactorization
{
public:
  ShiftedFactorization(const SparseMatrix &A, const SparseMatrix &E, Complex shift);

  Complex shift() const { return shift_; }
  Index size() const { return n_; }
  bool is_real() const { return static_cast<bool>(real_lu_); }

  // Solves (A - shift * E) X = rhs.
  CMatrix solve(const CMatrix &rhs) const;
  Matrix solve_real(const Matrix &rhs) const;

private:
  Complex shift_;
  Index n_ = 0;
  std::shared_ptr<Eigen::SparseLU<SparseMatrix>> real_lu_;
  std::shared_ptr<Eigen::SparseLU<CSparseMatrix>> complex_lu_;
};

// Factorization entry point for ADI/Krylov shifts; requires Re(shift) > 0.
ShiftedFactorization factorize_shifted(const SparseMatrix &A, const SparseMatrix &E,
                                       Complex shift);

// Memoizes one factorization per distinct shift value.
class FactorizationCache
{
public:
  FactorizationCache(const SparseMatrix &A, const SparseMatrix &E) : A_(&A), E_(&E) {}

  const ShiftedFactorization &get(Complex shift);
  std::size_t size() const { return entries_.size(); }

private:
  const SparseMatrix *A_;
  const SparseMatrix *E_;
  std::vector<std::unique_ptr<ShiftedFactorization>> entries_;
};

//
// Dense Lyapunov solver for A P E^T + E P A^T + Q = 0. The pencil is reduced to
// M = E^{-1} A, M is brought to complex Schur form, and the triangular equation is solved
// column by column. The result is symmetrized.
//
Matrix solve_dense_lyapunov(const Matrix &A, const Matrix &E, const Matrix &Q);

// Solves M X + X M^H + Q = 0 for Hermitian Q; M must be Hurwitz.
CMatrix solve_lyapunov_hermitian(const CMatrix &M, const CMatrix &Q);

//
// Sylvester solver for A X Eq^T + E X Aq^T + rhs = 0 with large sparse (A, E) and small dense
// (Aq, Eq). The small pencil is triangularized by a complex Schur decomposition and each
// column of the transformed unknown is obtained with one shifted sparse solve.
//
CMatrix solve_sylvester(const SparseMatrix &A, const SparseMatrix &E, const CMatrix &Aq,
                        const CMatrix &Eq, const CMatrix &rhs);
Matrix solve_sylvester(const SparseMatrix &A, const SparseMatrix &E, const Matrix &Aq,
                       const Matrix &Eq, const Matrix &rhs);
Matrix solve_sylvester(const Matrix &A, const Matrix &E, const Matrix &Aq, const Matrix &Eq,
                       const Matrix &rhs);

struct EigenDecomposition
{
  CVector values;                // sorted by (real, imag)
  std::optional<CMatrix> vectors;  // right eigenvectors, columns matched to values
};

EigenDecomposition eig_dense(const Matrix &M, bool want_vectors = false);
EigenDecomposition eig_dense(const CMatrix &M, bool want_vectors = false);

// Eigenvalues of E^{-1} A, sorted by (real, imag).
CVector pencil_eigenvalues(const Matrix &A, const Matrix &E);
CVector pencil_eigenvalues(const CMatrix &A, const CMatrix &E);

template <class MatrixType>
struct Orthonormalized
{
  MatrixType Q;
  Index dropped = 0;
};

// Two-pass modified Gram-Schmidt. A column is dropped when its norm after projection falls
// below droptol times its original norm.
Orthonormalized<Matrix> orthonormalize(const Matrix &M, double droptol = Tolerances::drop);
Orthonormalized<CMatrix> orthonormalize(const CMatrix &M, double droptol = Tolerances::drop);

// Orthonormalizes the columns of M against the orthonormal columns of Q and against each
// other. Only the new columns are returned.
Orthonormalized<Matrix> orthonormalize_against(const Matrix &Q, const Matrix &M,
                                               double droptol = Tolerances::drop);

// Largest principal angle between colsp(U) and colsp(W), in [0, pi/2]. Uses the sine
// formulation so that small angles keep full relative accuracy.
double principal_angle(const Matrix &U, const Matrix &W);
double principal_angle(const CMatrix &U, const CMatrix &W);

// Sparse real matrix times dense complex matrix.
CMatrix sparse_mul(const SparseMatrix &S, const CMatrix &X);

// Spectral norm of a dense matrix.
double norm2(const Matrix &M);
double norm2(const CMatrix &M);

}  // namespace lyapkit

#endif  // LYAPKIT_LINALG_HPP
