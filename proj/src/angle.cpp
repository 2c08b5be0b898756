// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "lyapkit/angle.hpp"

#include "lyapkit/error.hpp"

namespace lyapkit
{

CMatrix b_perp_EV(const SparseSystem &sys, const CMatrix &V)
{
  require(V.rows() == sys.order(), ErrorKind::DimensionMismatch,
          "b_perp_EV: basis row count differs from system order");
  const CMatrix B = sys.B.cast<Complex>();
  if (V.cols() == 0)
  {
    return B;
  }
  const CMatrix EV = sparse_mul(sys.E, V);
  const CMatrix VEV = V.adjoint() * EV;
  Eigen::PartialPivLU<CMatrix> lu(VEV);
  require(lu.rcond() > 1.0e-13, ErrorKind::SingularReducedE, "b_perp_EV: V^H E V is singular");
  return B - EV * lu.solve(CMatrix(V.adjoint() * B));
}

Matrix b_perp_EV(const SparseSystem &sys, const KrylovBasis &basis)
{
  return b_perp_EV(sys, CMatrix(basis.V.cast<Complex>())).real();
}

std::string_view to_string(AngleStatus status)
{
  switch (status)
  {
    case AngleStatus::Ok:
      return "ok";
    case AngleStatus::Converged:
      return "converged";
    case AngleStatus::Invariant:
      return "invariant";
  }
  return "unknown";
}

ObliquenessReport obliqueness(const SparseSystem &sys, const CMatrix &basis,
                              const ResidualFactor &residual, const std::string &label)
{
  require(residual.B_perp.rows() == sys.order() && residual.B_perp.cols() == sys.inputs(),
          ErrorKind::DimensionMismatch, "obliqueness: residual factor has wrong shape");
  ObliquenessReport report;
  report.shift_set_id = label;
  const double bnorm = sys.B.norm();
  if (residual.B_perp.norm() <= ANGLE_ZERO_TOL * bnorm)
  {
    report.status = AngleStatus::Converged;
    report.q = basis.cols();
    return report;
  }
  const CMatrix Q = orthonormalize(basis, Tolerances::krylov_drop).Q;
  report.q = Q.cols();
  const CMatrix Bev = b_perp_EV(sys, Q);
  if (Q.cols() == sys.order() || Bev.norm() == 0.0)
  {
    report.status = AngleStatus::Invariant;
    report.theta = 0.0;
    return report;
  }
  report.theta = principal_angle(Bev, residual.B_perp);
  return report;
}

}  // namespace lyapkit
