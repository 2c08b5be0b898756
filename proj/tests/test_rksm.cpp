// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <random>

#include <gtest/gtest.h>

#include "lyapkit/adi.hpp"
#include "lyapkit/bench.hpp"
#include "lyapkit/pork.hpp"
#include "lyapkit/rksm.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace lyapkit;

namespace
{

Matrix dense_residual(const SparseSystem &sys, const Matrix &Phat)
{
  return oracle::lyapunov_residual(Matrix(sys.A), Matrix(sys.E),
                                   sys.B * sys.B.transpose(), Phat);
}

Matrix random_matrix(Index r, Index c, std::mt19937_64 &rng)
{
  std::normal_distribution<double> N;
  Matrix M(r, c);
  for (Index i = 0; i < M.size(); i++)
  {
    M.data()[i] = N(rng);
  }
  return M;
}

}  // namespace

TEST(KrylovBasis, ScalarSystem)
{
  const SparseSystem sys = make_standard_system(Matrix::Constant(1, 1, -3.0).sparseView(),
                                                Matrix::Constant(1, 1, 2.0));
  const KrylovBasis b = build_krylov_basis(sys, ShiftSet{0.7});
  ASSERT_EQ(b.rank(), 1);
  EXPECT_NEAR(b.V(0, 0), 1.0, 1e-15);
}

TEST(KrylovBasis, OrthonormalAndMatchesAdiSpan)
{
  const auto gp = gen_random_stable(50, 2, 1, 14);
  for (const char *text : {"1,2", "1,2+1i,2-1i,0.3", "4,4,1+3i,1-3i,1+3i,1-3i"})
  {
    const ShiftSet s = ShiftSet::parse(text);
    const KrylovBasis b = build_krylov_basis(gp.sys, s);
    EXPECT_EQ(b.rank(), static_cast<Index>(s.size()) * 2) << text;
    EXPECT_LE((b.V.transpose() * b.V - Matrix::Identity(b.rank(), b.rank())).norm(), 1e-12);
    const AdiResult r = run_adi(gp.sys, s, {.residual_tol = 0.0});
    EXPECT_LE(principal_angle(b.V.cast<Complex>().eval(), r.factor.Z), 1e-8) << text;
  }
}

TEST(KrylovBasis, DuplicateShiftWithoutHigherOrderDirections)
{
  const auto gp = gen_random_stable(30, 1, 1, 15);
  KrylovOptions o;
  o.higher_order_repeats = false;
  const KrylovBasis b = build_krylov_basis(gp.sys, ShiftSet{1.0, 1.0}, o);
  EXPECT_EQ(b.rank(), 1);
  EXPECT_EQ(b.dropped_cols, 1);
  const KrylovBasis h = build_krylov_basis(gp.sys, ShiftSet{1.0, 1.0});
  EXPECT_EQ(h.rank(), 2);
  EXPECT_EQ(h.dropped_cols, 0);
}

TEST(KrylovBasis, IndependentOfThreadCount)
{
  const auto gp = gen_random_stable(80, 2, 1, 16);
  const ShiftSet s = ShiftSet::parse("1,2+1i,2-1i,5,0.2");
  setenv("LYAPKIT_THREADS", "1", 1);
  const Matrix V1 = build_krylov_basis(gp.sys, s).V;
  setenv("LYAPKIT_THREADS", "4", 1);
  const Matrix V4 = build_krylov_basis(gp.sys, s).V;
  unsetenv("LYAPKIT_THREADS");
  EXPECT_EQ(V1, V4);
}

TEST(Galerkin, ScalarFullOrder)
{
  const SparseSystem sys = make_standard_system(Matrix::Constant(1, 1, -2.0).sparseView(),
                                                Matrix::Constant(1, 1, 1.0));
  const ProjectedLyapunov p = galerkin_lyapunov(sys, build_krylov_basis(sys, ShiftSet{3.0}));
  EXPECT_NEAR(p.P_q(0, 0), 0.25, 1e-15);
}

TEST(Galerkin, DecoupledInvariantSubspace)
{
  const Index n = 6;
  Matrix A = Matrix::Zero(n, n);
  A.diagonal() << -1, -2, -3, -5, -8, -13;
  Matrix B(n, 1);
  B << 1, 2, 0.5, 1, 1, 1;
  const SparseSystem sys = make_standard_system(A.sparseView(), B);
  KrylovBasis basis;
  basis.V = Matrix::Identity(n, 2);
  const Matrix Phat = galerkin_lyapunov(sys, basis).approximation(basis.V);
  const Matrix P = oracle::lyapunov(A, Matrix::Identity(n, n), B * B.transpose());
  EXPECT_LE((Phat.topLeftCorner(2, 2) - P.topLeftCorner(2, 2)).norm(), 1e-15);
}

TEST(Galerkin, ProjectedResidualVanishes)
{
  RandomOptions o;
  o.nonsymmetric = false;
  const auto gp = gen_random_stable(50, 1, 1, 17, o);
  const KrylovBasis b = build_krylov_basis(gp.sys, ShiftSet::parse("0.5,1,2,4,8,16,32,64"));
  ASSERT_EQ(b.rank(), 8);
  const ProjectedLyapunov p = galerkin_lyapunov(gp.sys, b);
  EXPECT_EQ(p.W_used, Projection::Galerkin);
  const Matrix R = dense_residual(gp.sys, p.approximation(b.V));
  const double scale = (gp.sys.B * gp.sys.B.transpose()).norm();
  EXPECT_LE((b.V.transpose() * R * b.V).norm(), 1e-9 * scale);
  // The full residual R V is not zero away from a mirrored pole set.
  EXPECT_GT((R * b.V).norm(), 1e-8 * scale);
}

TEST(Galerkin, FullOrderIsExact)
{
  const auto gp = gen_random_stable(12, 1, 1, 18, {true, true});
  KrylovBasis b;
  b.V = Matrix::Identity(12, 12);
  const Matrix R = dense_residual(gp.sys, galerkin_lyapunov(gp.sys, b).approximation(b.V));
  EXPECT_LE(R.norm(), 1e-12 * (gp.sys.B * gp.sys.B.transpose()).norm());
}

TEST(Galerkin, BasisInvariance)
{
  std::mt19937_64 rng(4);
  const auto gp = gen_random_stable(40, 2, 1, 19);
  const KrylovBasis b = build_krylov_basis(gp.sys, ShiftSet::parse("1,3+1i,3-1i"));
  KrylovBasis bt = b;
  bt.V = b.V * (random_matrix(b.rank(), b.rank(), rng) + 3.0 * Matrix::Identity(b.rank(), b.rank()));
  const Matrix P1 = galerkin_lyapunov(gp.sys, b).approximation(b.V);
  const Matrix P2 = galerkin_lyapunov(gp.sys, bt).approximation(bt.V);
  EXPECT_LE((P1 - P2).norm(), 1e-9 * P1.norm());
}

TEST(Galerkin, UnstableProjectedPencilIsReported)
{
  Matrix A(2, 2);
  A << 0.5, 5, -5, -2;
  const SparseSystem sys = make_standard_system(A.sparseView(), Matrix::Ones(2, 1));
  KrylovBasis b;
  b.V = Matrix::Identity(2, 1);
  try
  {
    galerkin_lyapunov(sys, b);
    FAIL();
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.kind(), ErrorKind::UnstableProjectedPencil);
  }
}

TEST(PetrovGalerkin, WEqualVMatchesGalerkin)
{
  const auto gp = gen_random_stable(40, 1, 1, 20, {true, true});
  const KrylovBasis b = build_krylov_basis(gp.sys, ShiftSet::parse("1,2,3"));
  const ProjectedLyapunov g = galerkin_lyapunov(gp.sys, b);
  const ProjectedLyapunov p = petrov_galerkin_lyapunov(gp.sys, b, b.V);
  EXPECT_EQ(p.W_used, Projection::Supplied);
  EXPECT_LE((g.P_q - p.P_q).norm(), 1e-14 * g.P_q.norm());
}

TEST(PetrovGalerkin, RandomTestSpace)
{
  std::mt19937_64 rng(6);
  RandomOptions o;
  o.nonsymmetric = false;
  const auto gp = gen_random_stable(50, 1, 1, 21, o);
  const KrylovBasis b = build_krylov_basis(gp.sys, ShiftSet::parse("1,4,16"));
  // A small perturbation of V keeps the projected pencil stable.
  const Matrix W = b.V + 0.05 * random_matrix(50, 3, rng) / std::sqrt(50.0);
  const ProjectedLyapunov p = petrov_galerkin_lyapunov(gp.sys, b, W);
  const Matrix R = dense_residual(gp.sys, p.approximation(b.V));
  EXPECT_LE((W.transpose() * R * W).norm(), 1e-9 * (gp.sys.B * gp.sys.B.transpose()).norm());
}

TEST(PetrovGalerkin, SingularReducedE)
{
  const auto gp = gen_random_stable(20, 1, 1, 22);
  KrylovBasis b;
  b.V = Matrix::Identity(20, 1);
  Matrix W = Matrix::Zero(20, 1);
  W(5, 0) = 1.0;
  // E = I here, so W^T E V = 0.
  try
  {
    petrov_galerkin_lyapunov(gp.sys, b, W);
    FAIL();
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.kind(), ErrorKind::SingularReducedE);
  }
}

TEST(PetrovGalerkin, ObliqueTestSpaceReproducesAdi)
{
  std::mt19937_64 rng(8);
  for (int t = 0; t < 4; t++)
  {
    const auto gp = gen_random_stable(60 + 40 * t, 1 + t % 3, 1, 400 + t, {true, t % 2 == 1});
    const ShiftSet s = support::random_shifts(rng, 5, true, t == 3);
    const AdiResult r = run_adi(gp.sys, s, {.residual_tol = 0.0});
    const ReducedModel rom = pork_from_adi(r.factor, r.data);
    const KrylovBasis b = build_krylov_basis(gp.sys, s);
    const ObliqueProjector W = construct_W(gp.sys, b, rom);
    const ProjectedLyapunov p = petrov_galerkin_lyapunov(gp.sys, b, W.W);
    const CMatrix ZZ = r.factor.Z * r.factor.Z.adjoint();
    EXPECT_LE((p.approximation(b.V) - ZZ.real()).norm(), 1e-8 * ZZ.norm())
      << "case " << t << " shifts " << s.to_string() << " defect " << W.condition_defect;
    const Matrix R = dense_residual(gp.sys, p.approximation(b.V));
    EXPECT_LE((R * W.W).norm(), 1e-9 * (gp.sys.B * gp.sys.B.transpose()).norm() * W.W.norm());
  }
}
