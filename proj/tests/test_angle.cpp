// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "lyapkit/angle.hpp"
#include "lyapkit/bench.hpp"
#include "lyapkit/irka.hpp"

using namespace lyapkit;

TEST(BPerpEV, TrivialCases)
{
  const auto gp = gen_random_stable(20, 1, 1, 50);
  // B in colsp(EV).
  CMatrix V = CMatrix::Zero(20, 2);
  V.col(0) = gp.sys.B.cast<Complex>();
  V(3, 1) = 1.0;
  EXPECT_LE(b_perp_EV(gp.sys, V).norm(), 1e-14 * gp.sys.B.norm());
  // V orthogonal to B with E = I.
  Matrix B = Matrix::Zero(20, 1);
  B(0, 0) = 2.0;
  const SparseSystem sys = make_standard_system(gp.sys.A, B);
  CMatrix W = CMatrix::Zero(20, 1);
  W(5, 0) = 1.0;
  EXPECT_EQ(b_perp_EV(sys, W), B.cast<Complex>());
}

TEST(BPerpEV, ProjectedIdentity)
{
  const auto gp = gen_random_stable(50, 2, 1, 51, {true, true});
  const KrylovBasis b = build_krylov_basis(gp.sys, ShiftSet::parse("1,2+2i,2-2i,7"));
  const Matrix Bp = b_perp_EV(gp.sys, b);
  EXPECT_LE((b.V.transpose() * Bp).norm(), 1e-11 * gp.sys.B.norm());
}

TEST(BPerpEV, SingularReducedE)
{
  const auto gp = gen_random_stable(10, 1, 1, 52);
  CMatrix V = CMatrix::Zero(10, 2);
  V(0, 0) = 1.0;
  V(0, 1) = 1.0;
  try
  {
    b_perp_EV(gp.sys, V);
    FAIL();
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.kind(), ErrorKind::SingularReducedE);
  }
}

TEST(Obliqueness, ScalarSystemIsInvariant)
{
  const SparseSystem sys =
    make_standard_system(Matrix::Constant(1, 1, -1.0).sparseView(), Matrix::Ones(1, 1));
  const AdiResult r = run_adi(sys, ShiftSet{5.0}, {.residual_tol = 0.0});
  const ObliquenessReport rep = obliqueness(sys, r.factor.Z, r.residual, "s");
  EXPECT_EQ(rep.status, AngleStatus::Invariant);
  ASSERT_TRUE(rep.theta);
  EXPECT_EQ(*rep.theta, 0.0);
  EXPECT_EQ(rep.q, 1);
  EXPECT_EQ(rep.shift_set_id, "s");
}

TEST(Obliqueness, ConvergedResidualHasNoAngle)
{
  const SparseSystem sys =
    make_standard_system(Matrix::Constant(1, 1, -3.0).sparseView(), Matrix::Ones(1, 1));
  const AdiResult r = run_adi(sys, ShiftSet{3.0}, {.residual_tol = 0.0});
  const ObliquenessReport rep = obliqueness(sys, r.factor.Z, r.residual);
  EXPECT_EQ(rep.status, AngleStatus::Converged);
  EXPECT_FALSE(rep.theta);
  EXPECT_EQ(to_string(rep.status), "converged");
}

TEST(Obliqueness, SpanAndScalingInvariance)
{
  std::mt19937_64 rng(53);
  std::normal_distribution<double> N;
  const auto gp = gen_random_stable(60, 1, 1, 54);
  const AdiResult r = run_adi(gp.sys, ShiftSet::parse("0.5,2+1i,2-1i,6"), {.residual_tol = 0.0});
  const ObliquenessReport base = obliqueness(gp.sys, r.factor.Z, r.residual);
  ASSERT_EQ(base.status, AngleStatus::Ok);
  ASSERT_TRUE(base.theta);
  EXPECT_GT(*base.theta, 0.0);
  EXPECT_LE(*base.theta, std::numbers::pi / 2 + 1e-12);

  CMatrix T(4, 4);
  for (Index i = 0; i < T.size(); i++)
  {
    T.data()[i] = Complex(N(rng), N(rng));
  }
  T += 3.0 * CMatrix::Identity(4, 4);
  const ObliquenessReport moved = obliqueness(gp.sys, r.factor.Z * T, r.residual);
  EXPECT_LE(std::abs(*moved.theta - *base.theta), 1e-10);

  SparseSystem scaled = gp.sys;
  scaled.B *= 37.5;
  const AdiResult rs = run_adi(scaled, ShiftSet::parse("0.5,2+1i,2-1i,6"), {.residual_tol = 0.0});
  const ObliquenessReport sc = obliqueness(scaled, rs.factor.Z, rs.residual);
  EXPECT_LE(std::abs(*sc.theta - *base.theta), 1e-12);
}

TEST(Obliqueness, GalerkinFixedPointHasSmallAngle)
{
  RandomOptions o;
  o.nonsymmetric = false;
  const auto gp = gen_random_stable(80, 1, 1, 55, o);
  IrkaOptions io;
  io.max_iter = 100;
  io.shift_tol = 1e-10;
  const IrkaState st = irka_one_sided(gp.sys, ShiftSet{1.0, 1.0, 1.0, 1.0}, 4, io);
  ASSERT_EQ(st.status, IrkaStatus::Converged);
  const AdiResult r = run_adi(gp.sys, st.current_shifts, {.residual_tol = 0.0});
  const ObliquenessReport rep = obliqueness(gp.sys, r.factor.Z, r.residual);
  ASSERT_TRUE(rep.theta);
  EXPECT_LE(*rep.theta, 1e-6);

  // Theta near zero goes with a small Galerkin residual R V.
  const Matrix Z = realify(r.factor, r.data).Zs;
  const Matrix A(gp.sys.A);
  const Matrix P = Z * Z.transpose();
  const Matrix R = A * P + P * A.transpose() + gp.sys.B * gp.sys.B.transpose();
  const Matrix V = orthonormalize(Z).Q;
  EXPECT_LE((R * V).norm() / R.norm(), 1e-6);

  // A shift set away from the fixed point gives a clearly nonzero angle and residual.
  const AdiResult r2 = run_adi(gp.sys, ShiftSet{0.3, 3.0, 30.0, 300.0}, {.residual_tol = 0.0});
  const ObliquenessReport off = obliqueness(gp.sys, r2.factor.Z, r2.residual);
  EXPECT_GT(*off.theta, 1e-3);
}

TEST(Obliqueness, CyclicReuseDrivesAngleUp)
{
  const auto gp = gen_diffusion_1d(200, 1);
  const IrkaState st = irka_one_sided(gp.sys, ShiftSet{100.0, 100.0, 100.0, 100.0}, 4);
  AdiOptions ao;
  ao.residual_tol = 0.0;
  ao.cyclic = true;
  ao.max_steps = 60;
  std::vector<double> theta;
  run_adi(gp.sys, st.current_shifts, ao, [&](const AdiState &s, const AdiStepRecord &rec) {
    if (rec.step % 4 == 0)
    {
      const auto rep = obliqueness(gp.sys, s.factor().Z, s.residual());
      if (rep.theta)
      {
        theta.push_back(*rep.theta);
      }
    }
  });
  ASSERT_GE(theta.size(), 10u);
  EXPECT_LE(theta.front(), 1e-5);
  EXPECT_GT(theta.back(), 1.0);
}
