// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "lyapkit/rksm.hpp"

#include <algorithm>
#include <optional>

#include <Eigen/Eigenvalues>

#include "lyapkit/error.hpp"
#include "lyapkit/parallel.hpp"

namespace lyapkit
{

namespace
{

void fix_signs(Matrix &V)
{
  for (Index j = 0; j < V.cols(); j++)
  {
    Index i = 0;
    V.col(j).cwiseAbs().maxCoeff(&i);
    if (V(i, j) < 0.0)
    {
      V.col(j) *= -1.0;
    }
  }
}

void check_stable(const Matrix &A_q, const Matrix &E_q)
{
  if (A_q.rows() > PROJECTED_STABILITY_LIMIT)
  {
    return;
  }
  const CVector ev = pencil_eigenvalues(A_q, E_q);
  for (Index i = 0; i < ev.size(); i++)
  {
    require(ev(i).real() < 0.0, ErrorKind::UnstableProjectedPencil,
            "projected pencil has eigenvalue " + format_complex(ev(i)));
  }
}

ProjectedLyapunov project(const SparseSystem &sys, const Matrix &V, const Matrix &W,
                          Projection kind)
{
  ProjectedLyapunov pl;
  pl.W_used = kind;
  pl.A_q = W.transpose() * (sys.A * V);
  pl.E_q = W.transpose() * (sys.E * V);
  pl.B_q = W.transpose() * sys.B;
  Eigen::PartialPivLU<Matrix> lu(pl.E_q);
  require(pl.E_q.size() > 0 && lu.rcond() > 1.0e-13, ErrorKind::SingularReducedE,
          "projected E matrix W^T E V is singular");
  check_stable(pl.A_q, pl.E_q);
  try
  {
    pl.P_q = solve_dense_lyapunov(pl.A_q, pl.E_q, pl.B_q * pl.B_q.transpose());
  }
  catch (const Error &e)
  {
    if (e.kind() == ErrorKind::UnstablePencil)
    {
      throw Error(ErrorKind::UnstableProjectedPencil, e.what());
    }
    throw;
  }
  return pl;
}

}  // namespace

KrylovBasis build_krylov_basis(const SparseSystem &sys, const ShiftSet &shifts,
                               const KrylovOptions &opts)
{
  sys.validate();
  require(!shifts.empty(), ErrorKind::InvalidArgument, "krylov basis: empty shift set");
  require(shifts.conjugation_closed(), ErrorKind::NotConjugationClosed,
          "krylov basis: a real basis needs a conjugation-closed shift set");

  // One factorization per distinct shift in the upper half-plane, computed in parallel.
  std::vector<Complex> distinct;
  for (const auto &s : shifts)
  {
    if (s.imag() >= 0.0 && std::find(distinct.begin(), distinct.end(), s) == distinct.end())
    {
      distinct.push_back(s);
    }
  }
  std::vector<std::optional<ShiftedFactorization>> lus(distinct.size());
  parallel_for(distinct.size(),
               [&](std::size_t i) { lus[i].emplace(factorize_shifted(sys.A, sys.E, distinct[i])); });

  // Rational Arnoldi: each solve acts on E times the continuation block, the newest orthonormal
  // directions. This spans the same space as the plain solves against B but keeps the
  // orthogonalization well conditioned; a repeated shift yields its higher-order direction.
  const Index m = sys.inputs();
  KrylovBasis out;
  out.shifts = shifts;
  out.V = Matrix(sys.order(), 0);
  Matrix cont;
  std::vector<std::size_t> seen(distinct.size(), 0);
  for (const auto &s : shifts)
  {
    if (s.imag() < 0.0)
    {
      continue;
    }
    const auto g = static_cast<std::size_t>(std::find(distinct.begin(), distinct.end(), s) -
                                            distinct.begin());
    const ShiftedFactorization &lu = *lus[g];
    const Index width = lu.is_real() ? m : 2 * m;
    if (seen[g]++ > 0 && !opts.higher_order_repeats)
    {
      out.dropped_cols += width;
      continue;
    }
    Matrix block;
    if (lu.is_real())
    {
      block = lu.solve_real(cont.cols() == 0 ? sys.B : Matrix(sys.E * cont));
    }
    else
    {
      const CMatrix d = lu.solve(cont.cols() == 0 ? sys.B.cast<Complex>()
                                                  : CMatrix(sparse_mul(sys.E, cont.cast<Complex>())));
      block.resize(d.rows(), 2 * d.cols());
      block << d.real(), d.imag();
    }
    const auto ortho = orthonormalize_against(out.V, block, opts.drop_tol);
    out.dropped_cols += ortho.dropped;
    const Index k = ortho.Q.cols();
    if (k == 0)
    {
      continue;
    }
    Matrix V(sys.order(), out.V.cols() + k);
    V << out.V, ortho.Q;
    out.V = std::move(V);
    // A complex solve adds up to 2m directions; fold them into m continuation columns.
    cont = ortho.Q.leftCols(std::min(k, m));
    if (k > m)
    {
      cont.leftCols(k - m) += ortho.Q.rightCols(k - m);
    }
  }
  fix_signs(out.V);
  return out;
}

Matrix ProjectedLyapunov::low_rank_factor(const Matrix &V) const
{
  Eigen::SelfAdjointEigenSolver<Matrix> es(P_q);
  const Vector d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return V * (es.eigenvectors() * d.asDiagonal());
}

Matrix ProjectedLyapunov::approximation(const Matrix &V) const
{
  return V * P_q * V.transpose();
}

ProjectedLyapunov galerkin_lyapunov(const SparseSystem &sys, const KrylovBasis &basis)
{
  require(basis.V.rows() == sys.order(), ErrorKind::DimensionMismatch,
          "galerkin: basis row count differs from system order");
  return project(sys, basis.V, basis.V, Projection::Galerkin);
}

ProjectedLyapunov petrov_galerkin_lyapunov(const SparseSystem &sys, const KrylovBasis &basis,
                                           const Matrix &W)
{
  require(basis.V.rows() == sys.order() && W.rows() == sys.order() &&
            W.cols() == basis.V.cols(),
          ErrorKind::DimensionMismatch, "petrov-galerkin: W must be n x q like V");
  return project(sys, basis.V, W, Projection::Supplied);
}

}  // namespace lyapkit
