// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lyapkit/bench.hpp"
#include "lyapkit/linalg.hpp"
#include "oracles.hpp"

using namespace lyapkit;

namespace
{

SparseMatrix sparse(const Matrix &M)
{
  return M.sparseView();
}

Matrix random_stable(Index n, std::mt19937_64 &rng)
{
  std::normal_distribution<double> N;
  Matrix A(n, n);
  for (Index i = 0; i < n; i++)
  {
    for (Index j = 0; j < n; j++)
    {
      A(i, j) = N(rng);
    }
  }
  // Shift so that the spectral abscissa is at most -1.
  const double shift = eig_dense(A).values.real().maxCoeff() + 1.0;
  A.diagonal().array() -= shift;
  return A;
}

Matrix random_spd(Index n, std::mt19937_64 &rng)
{
  std::normal_distribution<double> N;
  Matrix G(n, n);
  for (Index i = 0; i < n; i++)
  {
    for (Index j = 0; j < n; j++)
    {
      G(i, j) = N(rng);
    }
  }
  return G * G.transpose() / static_cast<double>(n) + Matrix::Identity(n, n);
}

}  // namespace

TEST(FactorizeShifted, ScalarOperator)
{
  const SparseMatrix A = sparse(Matrix::Constant(1, 1, -2.0));
  const SparseMatrix E = sparse(Matrix::Identity(1, 1));
  const auto f = factorize_shifted(A, E, 1.0);
  EXPECT_NEAR(f.solve(CMatrix::Constant(1, 1, 1.0))(0, 0).real(), 1.0 / -3.0, 1e-15);
  const auto g = factorize_shifted(A, E, Complex(2.0, 0.0));
  EXPECT_NEAR(g.solve(CMatrix::Constant(1, 1, 3.0))(0, 0).real(), -0.75, 1e-15);
  EXPECT_TRUE(g.is_real());
}

TEST(FactorizeShifted, ComplexShiftResidual)
{
  const auto gp = gen_random_stable(50, 2, 1, 7);
  const auto f = factorize_shifted(gp.sys.A, gp.sys.E, Complex(1.0, 1.0));
  const CMatrix b = gp.sys.B.cast<Complex>();
  const CMatrix x = f.solve(b);
  const CMatrix r = gp.sys.A.cast<Complex>() * x - Complex(1.0, 1.0) * (gp.sys.E.cast<Complex>() * x) - b;
  EXPECT_LE(r.norm(), 1e-10 * b.norm());
}

TEST(FactorizeShifted, ConjugateShiftGivesConjugateSolution)
{
  const auto gp = gen_random_stable(40, 1, 1, 11, {true, true});
  const Complex s(0.7, 2.5);
  const CMatrix b = gp.sys.B.cast<Complex>();
  const CMatrix x1 = factorize_shifted(gp.sys.A, gp.sys.E, s).solve(b);
  const CMatrix x2 = factorize_shifted(gp.sys.A, gp.sys.E, std::conj(s)).solve(b);
  EXPECT_LE((x2 - x1.conjugate()).norm(), 1e-12 * x1.norm());
}

TEST(FactorizeShifted, Errors)
{
  const SparseMatrix A = sparse(Matrix::Constant(1, 1, 2.0));
  const SparseMatrix E = sparse(Matrix::Identity(1, 1));
  try
  {
    factorize_shifted(A, E, 2.0);
    FAIL() << "expected SingularShiftedMatrix";
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.kind(), ErrorKind::SingularShiftedMatrix);
  }
  try
  {
    factorize_shifted(A, E, Complex(-1.0, 1.0));
    FAIL() << "expected InvalidArgument";
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
}

TEST(FactorizationCache, OneEntryPerShift)
{
  const auto gp = gen_random_stable(20, 1, 1, 3);
  FactorizationCache cache(gp.sys.A, gp.sys.E);
  const auto *a = &cache.get(1.0);
  cache.get(Complex(2.0, 1.0));
  EXPECT_EQ(a, &cache.get(1.0));
  EXPECT_EQ(cache.size(), 2u);
}

TEST(DenseLyapunov, ScalarAndDiagonal)
{
  const Matrix P = solve_dense_lyapunov(Matrix::Constant(1, 1, -2.0), Matrix::Identity(1, 1),
                                        Matrix::Constant(1, 1, 1.0));
  EXPECT_NEAR(P(0, 0), 0.25, 1e-15);

  Matrix A = Matrix::Zero(2, 2);
  A.diagonal() << -1.0, -3.0;
  const Matrix P2 = solve_dense_lyapunov(A, Matrix::Identity(2, 2), Matrix::Identity(2, 2));
  EXPECT_NEAR(P2(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(P2(1, 1), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(P2(0, 1), 0.0, 1e-15);
}

TEST(DenseLyapunov, MatchesKroneckerOracle)
{
  std::mt19937_64 rng(5);
  std::normal_distribution<double> N;
  for (int trial = 0; trial < 5; trial++)
  {
    const Index n = 30;
    const Matrix A = random_stable(n, rng);
    const Matrix E = trial % 2 ? random_spd(n, rng) : Matrix(Matrix::Identity(n, n));
    Matrix B(n, 2);
    for (Index i = 0; i < B.size(); i++)
    {
      B.data()[i] = N(rng);
    }
    const Matrix Q = B * B.transpose();
    const Matrix P = solve_dense_lyapunov(A, E, Q);
    const Matrix Pk = oracle::lyapunov(A, E, Q);
    EXPECT_LE((P - Pk).norm(), 1e-9 * Pk.norm());
    EXPECT_EQ(P, P.transpose());
    const double scale = A.norm() * P.norm() * E.norm() + Q.norm();
    EXPECT_LE(oracle::lyapunov_residual(A, E, Q, P).norm(), 1e-10 * scale);
    Eigen::SelfAdjointEigenSolver<Matrix> es(P);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10 * P.norm());
  }
}

TEST(DenseLyapunov, UnstablePencil)
{
  try
  {
    solve_dense_lyapunov(Matrix::Constant(1, 1, 1.0), Matrix::Identity(1, 1),
                         Matrix::Identity(1, 1));
    FAIL();
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.kind(), ErrorKind::UnstablePencil);
  }
}

TEST(Sylvester, ScalarCase)
{
  const SparseMatrix A = sparse(Matrix::Constant(1, 1, -2.0));
  const SparseMatrix E = sparse(Matrix::Identity(1, 1));
  const Matrix X = solve_sylvester(A, E, Matrix(Matrix::Constant(1, 1, -3.0)),
                                   Matrix(Matrix::Identity(1, 1)),
                                   Matrix(Matrix::Constant(1, 1, 5.0)));
  // -2 x - 3 x + 5 = 0.
  EXPECT_NEAR(X(0, 0), 1.0, 1e-15);
}

TEST(Sylvester, TriangularSmallMatchesKronecker)
{
  CMatrix Aq(2, 2);
  Aq << Complex(-1.0, 0.5), 2.0, 0.0, Complex(-3.0, -1.0);
  const CMatrix Eq = CMatrix::Identity(2, 2);
  const CMatrix Ad = CMatrix::Constant(1, 1, -2.0);
  const CMatrix Ed = CMatrix::Identity(1, 1);
  CMatrix R(1, 2);
  R << Complex(1.0, 2.0), -0.5;
  const CMatrix X = solve_sylvester(sparse(Matrix::Constant(1, 1, -2.0)),
                                    sparse(Matrix::Identity(1, 1)), Aq, Eq, R);
  const CMatrix Xk = oracle::sylvester<CMatrix>(Ad, Ed, Aq, Eq, R);
  EXPECT_LE((X - Xk).norm(), 1e-14 * Xk.norm());
}

TEST(Sylvester, RandomSparseMatchesKronecker)
{
  std::mt19937_64 rng(9);
  std::normal_distribution<double> N;
  const auto gp = gen_random_stable(40, 1, 1, 21, {true, true});
  const Matrix Aq = random_stable(4, rng);
  const Matrix Eq = random_spd(4, rng);
  Matrix R(40, 4);
  for (Index i = 0; i < R.size(); i++)
  {
    R.data()[i] = N(rng);
  }
  const Matrix X = solve_sylvester(gp.sys.A, gp.sys.E, Aq, Eq, R);
  const Matrix Xk = oracle::sylvester<Matrix>(Matrix(gp.sys.A), Matrix(gp.sys.E), Aq, Eq, R);
  EXPECT_LE((X - Xk).norm(), 1e-9 * Xk.norm());
  const Matrix Xd = solve_sylvester(Matrix(gp.sys.A), Matrix(gp.sys.E), Aq, Eq, R);
  EXPECT_LE((Xd - Xk).norm(), 1e-9 * Xk.norm());
}

TEST(Sylvester, SpectraOverlap)
{
  // E^{-1} A = -2 and -Aq = -2 share an eigenvalue.
  try
  {
    solve_sylvester(sparse(Matrix::Constant(1, 1, -2.0)), sparse(Matrix::Identity(1, 1)),
                    Matrix(Matrix::Constant(1, 1, 2.0)), Matrix(Matrix::Identity(1, 1)),
                    Matrix(Matrix::Ones(1, 1)));
    FAIL();
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.kind(), ErrorKind::SpectraOverlap);
  }
}

TEST(Eig, SmallExamples)
{
  Matrix M(2, 2);
  M << 0, 1, -2, -2;
  const CVector ev = eig_dense(M).values;
  EXPECT_NEAR(std::abs(ev(0) - Complex(-1, -1)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(ev(1) - Complex(-1, 1)), 0.0, 1e-14);
  EXPECT_EQ(ev(0), std::conj(ev(1)));

  Matrix D = Matrix::Zero(2, 2);
  D.diagonal() << -1, -4;
  const CVector dv = eig_dense(D).values;
  EXPECT_DOUBLE_EQ(dv(0).real(), -4.0);
  EXPECT_DOUBLE_EQ(dv(1).real(), -1.0);
}

TEST(Eig, RandomMatchesDeterminantOracle)
{
  std::mt19937_64 rng(17);
  std::normal_distribution<double> N;
  Matrix M(10, 10);
  for (Index i = 0; i < M.size(); i++)
  {
    M.data()[i] = N(rng);
  }
  const auto ed = eig_dense(M, true);
  for (Index i = 0; i < ed.values.size(); i++)
  {
    EXPECT_LE(oracle::det_ratio(M, ed.values(i)), 1e-10);
    if (i > 0)
    {
      const bool sorted = ed.values(i - 1).real() < ed.values(i).real() ||
                          (ed.values(i - 1).real() == ed.values(i).real() &&
                           ed.values(i - 1).imag() <= ed.values(i).imag());
      EXPECT_TRUE(sorted);
    }
  }
  // A point that is not an eigenvalue is far from singular.
  EXPECT_GT(oracle::det_ratio(M, Complex(100.0, 0.0)), 1e-3);
  const CMatrix Vr = *ed.vectors;
  const CMatrix res = M.cast<Complex>() * Vr - Vr * ed.values.asDiagonal();
  EXPECT_LE(res.norm(), 1e-10 * M.norm() * Vr.norm());
}

TEST(PencilEigenvalues, GeneralizedProblem)
{
  Matrix A = Matrix::Zero(2, 2);
  A.diagonal() << -2, -6;
  Matrix E = Matrix::Zero(2, 2);
  E.diagonal() << 1, 2;
  const CVector ev = pencil_eigenvalues(A, E);
  EXPECT_NEAR(ev(0).real(), -3.0, 1e-14);
  EXPECT_NEAR(ev(1).real(), -2.0, 1e-14);
}

TEST(Orthonormalize, DropsDependentColumns)
{
  Matrix M = Matrix::Zero(3, 2);
  M(0, 0) = 1.0;
  M(0, 1) = 2.0;
  const auto r = orthonormalize(M);
  EXPECT_EQ(r.Q.cols(), 1);
  EXPECT_EQ(r.dropped, 1);
  EXPECT_NEAR(std::abs(r.Q(0, 0)), 1.0, 1e-15);
}

TEST(Orthonormalize, OrthonormalInputIsKept)
{
  std::mt19937_64 rng(2);
  std::normal_distribution<double> N;
  Matrix G(20, 4);
  for (Index i = 0; i < G.size(); i++)
  {
    G.data()[i] = N(rng);
  }
  const Matrix Q0 = Eigen::HouseholderQR<Matrix>(G).householderQ() * Matrix::Identity(20, 4);
  const Matrix Q = orthonormalize(Q0).Q;
  for (Index j = 0; j < 4; j++)
  {
    const double s = Q.col(j).dot(Q0.col(j)) > 0 ? 1.0 : -1.0;
    EXPECT_LE((Q.col(j) - s * Q0.col(j)).norm(), 1e-13);
  }
}

TEST(Orthonormalize, RandomTall)
{
  std::mt19937_64 rng(3);
  std::normal_distribution<double> N;
  Matrix M(100, 8);
  for (Index i = 0; i < M.size(); i++)
  {
    M.data()[i] = N(rng);
  }
  const Matrix Q = orthonormalize(M).Q;
  ASSERT_EQ(Q.cols(), 8);
  EXPECT_LE((Q.transpose() * Q - Matrix::Identity(8, 8)).norm(), 1e-12);
  EXPECT_LE(principal_angle(Q, M), 1e-12);
}

TEST(PrincipalAngle, PlanarGeometry)
{
  const Matrix e1 = Matrix::Identity(3, 3).col(0);
  const Matrix e2 = Matrix::Identity(3, 3).col(1);
  EXPECT_NEAR(principal_angle(e1, e1), 0.0, 1e-15);
  EXPECT_NEAR(principal_angle(e1, e2), M_PI / 2, 1e-15);
  EXPECT_NEAR(principal_angle(e1, Matrix((e1 + e2) / std::sqrt(2.0))), M_PI / 4, 1e-15);
}

TEST(PrincipalAngle, SmallAngleKeepsRelativeAccuracy)
{
  const double t = 1e-9;
  Matrix u(2, 1), w(2, 1);
  u << 1, 0;
  w << std::cos(t), std::sin(t);
  EXPECT_NEAR(principal_angle(u, w) / t, 1.0, 1e-6);
}

TEST(PrincipalAngle, ZeroSubspace)
{
  try
  {
    principal_angle(Matrix(Matrix::Zero(3, 1)), Matrix(Matrix::Identity(3, 1)));
    FAIL();
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroSubspace);
  }
}
