// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "lyapkit/pork.hpp"

#include <algorithm>
#include <limits>

#include <Eigen/SVD>

#include "lyapkit/error.hpp"

namespace lyapkit
{

namespace
{


CMatrix output_map(const std::optional<Matrix> &C, const CMatrix &basis)
{
  if (!C)
  {
    return CMatrix(0, basis.cols());
  }
  require(C->cols() == basis.rows(), ErrorKind::DimensionMismatch,
          "output map C has wrong column count");
  return C->cast<Complex>() * basis;
}

}  // namespace

bool ReducedModel::is_real(double tol) const
{
  return relative_imag(E) <= tol && relative_imag(A) <= tol && relative_imag(B) <= tol &&
         relative_imag(C) <= tol && relative_imag(P) <= tol;
}

DenseSystem ReducedModel::to_real(double tol) const
{
  require(is_real(tol), ErrorKind::InvalidArgument,
          "reduced model has complex entries; use a balanced shift set");
  return DenseSystem{E.real(), A.real(), B.real(), C.real()};
}

CMatrix ReducedModel::gramian_approximation() const
{
  require(basis.cols() == order(), ErrorKind::InvalidArgument, "reduced model has no basis");
  return basis * P * basis.adjoint();
}

double ReducedModel::lyapunov_residual() const
{
  const CMatrix BB = B * B.adjoint();
  const CMatrix R = A * P * E.adjoint() + E * P * A.adjoint() + BB;
  const double scale = BB.norm();
  return scale > 0.0 ? R.norm() / scale : R.norm();
}

CVector model_poles(const CMatrix &A, const CMatrix &E) { return pencil_eigenvalues(A, E); }

ReducedModel pork_from_adi(const LowRankFactor &factor, const SylvesterData &data,
                           const std::optional<Matrix> &C)
{
  const Index q = factor.rank();
  require(data.S.rows() == q && data.L.cols() == q, ErrorKind::DimensionMismatch,
          "pork: Sylvester data does not match the factor");
  ReducedModel rom;
  const CMatrix Lt = data.L.transpose().cast<Complex>();
  rom.E = CMatrix::Identity(q, q);
  rom.A = data.S - Lt * Lt.transpose();
  rom.B = -Lt;
  rom.C = output_map(C, factor.Z);
  rom.P = CMatrix::Identity(q, q);
  rom.basis = factor.Z;
  rom.poles = model_poles(rom.A, rom.E);
  rom.source = "pork_from_adi";
  return rom;
}

ReducedModel pork_from_adi_real(const LowRankFactor &factor, const SylvesterData &data,
                                const std::optional<Matrix> &C)
{
  const RealAdiData rd = realify(factor, data);
  const Index q = factor.rank();
  // Coordinates x_s = R x: P_s = R R^H, B_s = R B_q = -P_s L_s^T, A_s = S_s + B_s L_s.
  const Matrix Bs = -rd.W * rd.L.transpose();
  ReducedModel rom;
  rom.E = CMatrix::Identity(q, q);
  rom.A = (rd.S + Bs * rd.L).cast<Complex>();
  rom.B = Bs.cast<Complex>();
  rom.C = output_map(C, rd.Zs.cast<Complex>());
  rom.P = rd.W.cast<Complex>();
  rom.basis = rd.Zs.cast<Complex>();
  rom.poles = model_poles(rom.A, rom.E);
  rom.source = "pork_from_adi_real";
  return rom;
}

double observability_margin(const CMatrix &S, const CMatrix &L)
{
  const Index q = S.rows();
  CMatrix stacked(q + L.rows(), q);
  stacked << S, L;
  const double scale = std::max(norm2(stacked), 1.0e-300);
  const CVector ev = eig_dense(S).values;
  double margin = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < ev.size(); i++)
  {
    stacked.topRows(q) = S - ev(i) * CMatrix::Identity(q, q);
    Eigen::BDCSVD<CMatrix> svd(stacked);
    margin = std::min(margin, svd.singularValues()(q - 1) / scale);
  }
  return margin;
}

ReducedModel pork_from_sylvester(const SparseSystem &sys, const CMatrix &V, const CMatrix &S,
                                 const CMatrix &L, const std::optional<Matrix> &C)
{
  const Index q = V.cols();
  require(V.rows() == sys.order() && S.rows() == q && S.cols() == q && L.rows() == sys.inputs() &&
            L.cols() == q && q > 0,
          ErrorKind::DimensionMismatch, "pork_from_sylvester: inconsistent dimensions");
  const CMatrix BL = sys.B.cast<Complex>() * L;
  const CMatrix res = sparse_mul(sys.A, V) - sparse_mul(sys.E, V * S) - BL;
  const double rel = BL.norm() > 0.0 ? res.norm() / BL.norm() : res.norm();
  require(rel <= 1.0e-8, ErrorKind::InvalidArgument,
          "pork_from_sylvester: A V - E V S = B L violated, relative residual " +
            std::to_string(rel));
  require(observability_margin(S, L) >= OBSERVABILITY_TOL, ErrorKind::NotObservable,
          "pork_from_sylvester: (S, L) is not observable");

  // Q S + S^H Q = L^H L, written as (-S^H) Q + Q (-S) + L^H L = 0.
  const CMatrix LhL = L.adjoint() * L;
  CMatrix Q;
  try
  {
    Q = solve_lyapunov_hermitian(CMatrix(-S.adjoint()), LhL);
  }
  catch (const Error &e)
  {
    if (e.kind() == ErrorKind::UnstablePencil)
    {
      throw Error(ErrorKind::InvalidArgument,
                  "pork_from_sylvester: S must have its spectrum in the right half-plane");
    }
    throw;
  }
  Eigen::PartialPivLU<CMatrix> lu(Q);
  ReducedModel rom;
  rom.E = Q;
  rom.A = Q * S - LhL;
  rom.B = -L.adjoint();
  rom.C = output_map(C, V);
  const CMatrix P = lu.inverse();
  rom.P = 0.5 * (P + P.adjoint());
  rom.basis = V;
  rom.poles = model_poles(rom.A, rom.E);
  rom.source = "pork_from_sylvester";
  return rom;
}

ObliqueProjector construct_W(const SparseSystem &sys, const KrylovBasis &basis,
                             const ReducedModel &rom)
{
  const Matrix &V = basis.V;
  const Index q = V.cols();
  const Index m = sys.inputs();
  require(rom.basis.rows() == sys.order() && rom.basis.cols() == q && rom.order() == q,
          ErrorKind::DimensionMismatch, "construct_W: model basis and V differ in size");

  // Z = V T by least squares against the orthonormal V.
  const CMatrix T = V.transpose().cast<Complex>() * rom.basis;
  const double fit = (V.cast<Complex>() * T - rom.basis).norm() /
                     std::max(rom.basis.norm(), 1.0e-300);
  require(fit <= BASIS_FIT_TOL, ErrorKind::InvalidArgument,
          "construct_W: model basis is not contained in colsp(V), fit residual " +
            std::to_string(fit));

  // E V E_V^{-1} B_V equals E Z E_q^{-1} B_q in any coordinates.
  const CMatrix G = T * Eigen::PartialPivLU<CMatrix>(rom.E).solve(rom.B);
  const Matrix F = G.real();
  const Matrix EV = sys.E * V;
  Matrix EVB(sys.order(), q + m);
  EVB << EV, sys.B;
  const Matrix D = sys.B - EV * F;

  ObliqueProjector out;
  Eigen::BDCSVD<Matrix> enrich(EVB, Eigen::ComputeThinU);
  const Vector sv = enrich.singularValues();
  Index r = 0;
  while (r < sv.size() && sv(r) > 1.0e-12 * sv(0))
  {
    r++;
  }
  out.rank_deficient = r < q + m;

  // Orthonormal basis Q of colsp([EV, B]); K spans the complement of Q^T D inside it.
  const Matrix Q = enrich.matrixU().leftCols(r);
  const Matrix N = Q.transpose() * D;
  Eigen::BDCSVD<Matrix> svd(N, Eigen::ComputeFullU);
  const Index keep = std::min(q, r);
  out.W = Matrix::Zero(sys.order(), q);
  out.W.leftCols(keep) = Q * svd.matrixU().rightCols(keep);
  const double scale = std::max(out.W.norm() * sys.B.norm(), 1.0e-300);
  out.condition_defect = (out.W.transpose() * D).norm() / scale;
  return out;
}

}  // namespace lyapkit
