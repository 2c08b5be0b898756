// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "lyapkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace lyapkit
{

std::string_view to_string(ErrorKind kind)
{
  switch (kind)
  {
    case ErrorKind::InvalidArgument:
      return "InvalidArgument";
    case ErrorKind::DimensionMismatch:
      return "DimensionMismatch";
    case ErrorKind::SingularShiftedMatrix:
      return "SingularShiftedMatrix";
    case ErrorKind::UnstablePencil:
      return "UnstablePencil";
    case ErrorKind::SpectraOverlap:
      return "SpectraOverlap";
    case ErrorKind::ConvergenceFailure:
      return "ConvergenceFailure";
    case ErrorKind::ZeroSubspace:
      return "ZeroSubspace";
    case ErrorKind::DimensionTooLarge:
      return "DimensionTooLarge";
    case ErrorKind::NotConjugationClosed:
      return "NotConjugationClosed";
    case ErrorKind::UnstableProjectedPencil:
      return "UnstableProjectedPencil";
    case ErrorKind::SingularReducedE:
      return "SingularReducedE";
    case ErrorKind::NotObservable:
      return "NotObservable";
    case ErrorKind::RankDeficientEnrichment:
      return "RankDeficientEnrichment";
    case ErrorKind::UnstableSystem:
      return "UnstableSystem";
    case ErrorKind::Io:
      return "Io";
  }
  return "Unknown";
}

namespace
{

// Condition-number lower bound above which a shifted matrix is treated as singular.
constexpr double SINGULAR_COND = 1.0e15;

std::string shift_label(Complex s)
{
  std::ostringstream os;
  os.precision(17);
  os << s.real() << (s.imag() < 0 ? "-" : "+") << std::abs(s.imag()) << "i";
  return os.str();
}

template <class LU, class Sparse>
void probe_singularity(const LU &lu, const Sparse &K, Complex shift)
{
  using Scalar = typename Sparse::Scalar;
  const Index n = K.rows();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> b(n);
  for (Index i = 0; i < n; i++)
  {
    // Deterministic, sign-alternating probe avoids accidental cancellation with smooth modes.
    b(i) = Scalar((i % 2 == 0 ? 1.0 : -1.0) * (1.0 + 0.5 * std::sin(0.7 * double(i))));
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x = lu.solve(b);
  if (!x.allFinite())
  {
    throw Error(ErrorKind::SingularShiftedMatrix,
                "non-finite solution for shift " + shift_label(shift));
  }
  double norm_k = 0.0;
  for (Index j = 0; j < K.outerSize(); j++)
  {
    double col = 0.0;
    for (typename Sparse::InnerIterator it(K, j); it; ++it)
    {
      col += std::abs(it.value());
    }
    norm_k = std::max(norm_k, col);
  }
  const double cond_lower = norm_k * x.template lpNorm<1>() / b.template lpNorm<1>();
  if (!(cond_lower < SINGULAR_COND))
  {
    throw Error(ErrorKind::SingularShiftedMatrix,
                "(A - sE) numerically singular for shift " + shift_label(shift));
  }
}

void check_square_pair(const SparseMatrix &A, const SparseMatrix &E)
{
  require(A.rows() > 0 && A.rows() == A.cols(), ErrorKind::DimensionMismatch,
          "A must be square and nonempty");
  require(E.rows() == A.rows() && E.cols() == A.cols(), ErrorKind::DimensionMismatch,
          "E must have the same shape as A");
}


template <class Vec>
bool complex_less(const typename Vec::Scalar &a, const typename Vec::Scalar &b)
{
  if (a.real() != b.real())
  {
    return a.real() < b.real();
  }
  return a.imag() < b.imag();
}

EigenDecomposition sorted_decomposition(const CVector &values, const CMatrix *vectors)
{
  std::vector<Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return complex_less<CVector>(values(a), values(b));
  });
  EigenDecomposition out;
  out.values.resize(values.size());
  if (vectors)
  {
    out.vectors = CMatrix(vectors->rows(), vectors->cols());
  }
  for (std::size_t i = 0; i < order.size(); i++)
  {
    out.values(Index(i)) = values(order[i]);
    if (vectors)
    {
      out.vectors->col(Index(i)) = vectors->col(order[i]);
    }
  }
  return out;
}

template <class Mat>
Orthonormalized<Mat> orthonormalize_impl(const Mat *prior, const Mat &M, double droptol)
{
  const Index n = M.rows();
  Orthonormalized<Mat> out;
  out.Q.resize(n, M.cols());
  Index k = 0;
  for (Index j = 0; j < M.cols(); j++)
  {
    auto v = M.col(j).eval();
    const double norm0 = v.norm();
    if (!(norm0 > 0.0) || !std::isfinite(norm0))
    {
      out.dropped++;
      continue;
    }
    for (int pass = 0; pass < 2; pass++)
    {
      if (prior)
      {
        for (Index i = 0; i < prior->cols(); i++)
        {
          v -= prior->col(i) * prior->col(i).dot(v);
        }
      }
      for (Index i = 0; i < k; i++)
      {
        v -= out.Q.col(i) * out.Q.col(i).dot(v);
      }
    }
    const double nrm = v.norm();
    if (nrm <= droptol * norm0)
    {
      out.dropped++;
      continue;
    }
    out.Q.col(k++) = v / nrm;
  }
  out.Q.conservativeResize(n, k);
  return out;
}

template <class Mat>
double principal_angle_impl(const Mat &U, const Mat &W)
{
  require(U.rows() == W.rows(), ErrorKind::DimensionMismatch,
          "principal_angle: row counts differ");
  Mat QU = orthonormalize(U).Q;
  Mat QW = orthonormalize(W).Q;
  require(QU.cols() > 0 && QW.cols() > 0, ErrorKind::ZeroSubspace,
          "principal_angle: a subspace is empty");
  if (QU.cols() < QW.cols())
  {
    std::swap(QU, QW);
  }
  const Mat D = QW - QU * (QU.adjoint() * QW);
  return std::asin(std::min(1.0, norm2(D)));
}

}  // namespace

// ---------------------------------------------------------------------------------------
// Shifted factorizations

ShiftedFactorization::ShiftedFactorization(const SparseMatrix &A, const SparseMatrix &E,
                                           Complex shift)
  : shift_(shift), n_(A.rows())
{
  check_square_pair(A, E);
  require(std::isfinite(shift.real()) && std::isfinite(shift.imag()),
          ErrorKind::InvalidArgument, "shift must be finite");
  if (shift.imag() == 0.0)
  {
    SparseMatrix K = A - shift.real() * E;
    K.makeCompressed();
    real_lu_ = std::make_shared<Eigen::SparseLU<SparseMatrix>>();
    real_lu_->analyzePattern(K);
    real_lu_->factorize(K);
    if (real_lu_->info() != Eigen::Success)
    {
      throw Error(ErrorKind::SingularShiftedMatrix,
                  "LU failed for shift " + shift_label(shift) + ": " +
                    real_lu_->lastErrorMessage());
    }
    probe_singularity(*real_lu_, K, shift);
  }
  else
  {
    CSparseMatrix K = A.cast<Complex>() - shift * E.cast<Complex>();
    K.makeCompressed();
    complex_lu_ = std::make_shared<Eigen::SparseLU<CSparseMatrix>>();
    complex_lu_->analyzePattern(K);
    complex_lu_->factorize(K);
    if (complex_lu_->info() != Eigen::Success)
    {
      throw Error(ErrorKind::SingularShiftedMatrix,
                  "LU failed for shift " + shift_label(shift) + ": " +
                    complex_lu_->lastErrorMessage());
    }
    probe_singularity(*complex_lu_, K, shift);
  }
}

CMatrix ShiftedFactorization::solve(const CMatrix &rhs) const
{
  require(rhs.rows() == n_, ErrorKind::DimensionMismatch, "solve: rhs row count");
  CMatrix X(n_, rhs.cols());
  if (real_lu_)
  {
    // SparseLU needs contiguous destinations; the real/imag views are strided.
    const Matrix xr = real_lu_->solve(Matrix(rhs.real()));
    const Matrix xi = real_lu_->solve(Matrix(rhs.imag()));
    X.real() = xr;
    X.imag() = xi;
  }
  else
  {
    X = complex_lu_->solve(rhs);
  }
  if (!all_finite(X))
  {
    throw Error(ErrorKind::SingularShiftedMatrix,
                "non-finite solution for shift " + shift_label(shift_));
  }
  return X;
}

Matrix ShiftedFactorization::solve_real(const Matrix &rhs) const
{
  require(is_real(), ErrorKind::InvalidArgument, "solve_real needs a real shift");
  require(rhs.rows() == n_, ErrorKind::DimensionMismatch, "solve: rhs row count");
  Matrix X = real_lu_->solve(rhs);
  if (!X.allFinite())
  {
    throw Error(ErrorKind::SingularShiftedMatrix,
                "non-finite solution for shift " + shift_label(shift_));
  }
  return X;
}

ShiftedFactorization factorize_shifted(const SparseMatrix &A, const SparseMatrix &E,
                                       Complex shift)
{
  require(shift.real() > 0.0, ErrorKind::InvalidArgument,
          "shift must lie in the open right half-plane, got " + shift_label(shift));
  return ShiftedFactorization(A, E, shift);
}

const ShiftedFactorization &FactorizationCache::get(Complex shift)
{
  for (const auto &entry : entries_)
  {
    if (entry->shift() == shift)
    {
      return *entry;
    }
  }
  entries_.push_back(std::make_unique<ShiftedFactorization>(*A_, *E_, shift));
  return *entries_.back();
}

CMatrix sparse_mul(const SparseMatrix &S, const CMatrix &X)
{
  CMatrix Y(S.rows(), X.cols());
  const Matrix yr = S * Matrix(X.real());
  const Matrix yi = S * Matrix(X.imag());
  Y.real() = yr;
  Y.imag() = yi;
  return Y;
}

// ---------------------------------------------------------------------------------------
// Dense Lyapunov and Sylvester equations

CMatrix solve_lyapunov_hermitian(const CMatrix &M, const CMatrix &Q)
{
  const Index n = M.rows();
  require(M.cols() == n && Q.rows() == n && Q.cols() == n, ErrorKind::DimensionMismatch,
          "lyapunov: M and Q must be square of equal order");
  require(all_finite(M) && all_finite(Q), ErrorKind::InvalidArgument,
          "lyapunov: non-finite input");
  if (n == 0)
  {
    return CMatrix(0, 0);
  }
  Eigen::ComplexSchur<CMatrix> schur(M);
  require(schur.info() == Eigen::Success, ErrorKind::ConvergenceFailure,
          "lyapunov: Schur decomposition did not converge");
  const CMatrix &T = schur.matrixT();
  const CMatrix &U = schur.matrixU();
  for (Index i = 0; i < n; i++)
  {
    if (!(T(i, i).real() < 0.0))
    {
      throw Error(ErrorKind::UnstablePencil,
                  "eigenvalue with nonnegative real part: " + shift_label(T(i, i)));
    }
  }

  // T Y + Y T^H = -U^H Q U, solved for columns n-1 down to 0.
  const CMatrix Qh = U.adjoint() * Q * U;
  CMatrix Y = CMatrix::Zero(n, n);
  CVector rhs(n);
  for (Index j = n - 1; j >= 0; j--)
  {
    const Index tail = n - 1 - j;
    rhs = -Qh.col(j);
    if (tail > 0)
    {
      rhs.noalias() -= Y.rightCols(tail) * T.row(j).tail(tail).adjoint();
    }
    const Complex cj = std::conj(T(j, j));
    for (Index i = n - 1; i >= 0; i--)
    {
      Complex acc = rhs(i);
      const Index len = n - 1 - i;
      if (len > 0)
      {
        acc -= (T.row(i).tail(len) * Y.col(j).tail(len))(0, 0);
      }
      Y(i, j) = acc / (T(i, i) + cj);
    }
  }
  CMatrix X = U * Y * U.adjoint();
  return 0.5 * (X + X.adjoint());
}

Matrix solve_dense_lyapunov(const Matrix &A, const Matrix &E, const Matrix &Q)
{
  const Index n = A.rows();
  require(A.cols() == n && E.rows() == n && E.cols() == n && Q.rows() == n && Q.cols() == n,
          ErrorKind::DimensionMismatch, "lyapunov: A, E, Q must be square of equal order");
  require(A.allFinite() && E.allFinite() && Q.allFinite(), ErrorKind::InvalidArgument,
          "lyapunov: non-finite input");
  if (n == 0)
  {
    return Matrix(0, 0);
  }
  Eigen::PartialPivLU<Matrix> lu(E);
  require(lu.rcond() > 1.0e-14, ErrorKind::InvalidArgument, "lyapunov: E is singular");
  const Matrix M = lu.solve(A);
  const Matrix Y = lu.solve(Q);
  const Matrix Qt = lu.solve(Matrix(Y.transpose())).transpose();
  CMatrix X = solve_lyapunov_hermitian(M.cast<Complex>(), Qt.cast<Complex>());
  Matrix P = X.real();
  return 0.5 * (P + P.transpose());
}

CMatrix solve_sylvester(const SparseMatrix &A, const SparseMatrix &E, const CMatrix &Aq,
                        const CMatrix &Eq, const CMatrix &rhs)
{
  check_square_pair(A, E);
  const Index n = A.rows();
  const Index q = Aq.rows();
  require(Aq.cols() == q && Eq.rows() == q && Eq.cols() == q, ErrorKind::DimensionMismatch,
          "sylvester: Aq and Eq must be square of equal order");
  require(rhs.rows() == n && rhs.cols() == q, ErrorKind::DimensionMismatch,
          "sylvester: rhs must be n x q");
  if (q == 0)
  {
    return CMatrix(n, 0);
  }
  Eigen::PartialPivLU<CMatrix> luq(Eq);
  require(luq.rcond() > 1.0e-14, ErrorKind::SingularReducedE, "sylvester: Eq is singular");

  // Right-multiplying by Eq^{-T}: A X + E X H + F0 = 0 with H = (Eq^{-1} Aq)^T.
  const CMatrix H = luq.solve(Aq).transpose();
  const CMatrix F0 = luq.solve(CMatrix(rhs.transpose())).transpose();
  Eigen::ComplexSchur<CMatrix> schur(H);
  require(schur.info() == Eigen::Success, ErrorKind::ConvergenceFailure,
          "sylvester: Schur decomposition did not converge");
  const CMatrix &T = schur.matrixT();
  const CMatrix &U = schur.matrixU();
  const CMatrix F = F0 * U;

  FactorizationCache cache(A, E);
  CMatrix Y(n, q);
  for (Index j = 0; j < q; j++)
  {
    CMatrix r = -F.col(j);
    if (j > 0)
    {
      r -= sparse_mul(E, CMatrix(Y.leftCols(j) * T.col(j).head(j)));
    }
    try
    {
      Y.col(j) = cache.get(-T(j, j)).solve(r);
    }
    catch (const Error &e)
    {
      if (e.kind() == ErrorKind::SingularShiftedMatrix)
      {
        throw Error(ErrorKind::SpectraOverlap, e.what());
      }
      throw;
    }
  }
  return Y * U.adjoint();
}

Matrix solve_sylvester(const SparseMatrix &A, const SparseMatrix &E, const Matrix &Aq,
                       const Matrix &Eq, const Matrix &rhs)
{
  return solve_sylvester(A, E, CMatrix(Aq.cast<Complex>()), CMatrix(Eq.cast<Complex>()),
                         CMatrix(rhs.cast<Complex>()))
    .real();
}

Matrix solve_sylvester(const Matrix &A, const Matrix &E, const Matrix &Aq, const Matrix &Eq,
                       const Matrix &rhs)
{
  const SparseMatrix As = A.sparseView(0.0, 0.0);
  const SparseMatrix Es = E.sparseView(0.0, 0.0);
  return solve_sylvester(As, Es, Aq, Eq, rhs);
}

// ---------------------------------------------------------------------------------------
// Eigenvalues

namespace
{

// Triangular input deflates completely; its eigenvalues are the diagonal entries.
template <class M>
bool is_triangular(const M &A)
{
  return A.template triangularView<Eigen::StrictlyLower>().toDenseMatrix().isZero(0.0) ||
         A.template triangularView<Eigen::StrictlyUpper>().toDenseMatrix().isZero(0.0);
}

}  // namespace

EigenDecomposition eig_dense(const Matrix &M, bool want_vectors)
{
  require(M.rows() == M.cols(), ErrorKind::DimensionMismatch, "eig: matrix must be square");
  require(M.allFinite(), ErrorKind::InvalidArgument, "eig: non-finite input");
  if (M.rows() == 0)
  {
    return {};
  }
  if (!want_vectors && is_triangular(M))
  {
    return sorted_decomposition(M.diagonal().template cast<Complex>(), nullptr);
  }
  Eigen::EigenSolver<Matrix> es(M, want_vectors);
  require(es.info() == Eigen::Success, ErrorKind::ConvergenceFailure,
          "eig: QR iteration did not converge");
  const CVector values = es.eigenvalues();
  if (want_vectors)
  {
    const CMatrix vectors = es.eigenvectors();
    return sorted_decomposition(values, &vectors);
  }
  return sorted_decomposition(values, nullptr);
}

EigenDecomposition eig_dense(const CMatrix &M, bool want_vectors)
{
  require(M.rows() == M.cols(), ErrorKind::DimensionMismatch, "eig: matrix must be square");
  require(all_finite(M), ErrorKind::InvalidArgument, "eig: non-finite input");
  if (M.rows() == 0)
  {
    return {};
  }
  if (!want_vectors && is_triangular(M))
  {
    return sorted_decomposition(M.diagonal().template cast<Complex>(), nullptr);
  }
  Eigen::ComplexEigenSolver<CMatrix> es(M, want_vectors);
  require(es.info() == Eigen::Success, ErrorKind::ConvergenceFailure,
          "eig: QR iteration did not converge");
  const CVector values = es.eigenvalues();
  if (want_vectors)
  {
    const CMatrix vectors = es.eigenvectors();
    return sorted_decomposition(values, &vectors);
  }
  return sorted_decomposition(values, nullptr);
}

CVector pencil_eigenvalues(const Matrix &A, const Matrix &E)
{
  require(A.rows() == A.cols() && E.rows() == A.rows() && E.cols() == A.cols(),
          ErrorKind::DimensionMismatch, "pencil: A and E must be square of equal order");
  if (A.rows() == 0)
  {
    return CVector(0);
  }
  Eigen::PartialPivLU<Matrix> lu(E);
  require(lu.rcond() > 1.0e-14, ErrorKind::SingularReducedE, "pencil: E is singular");
  return eig_dense(Matrix(lu.solve(A))).values;
}

CVector pencil_eigenvalues(const CMatrix &A, const CMatrix &E)
{
  require(A.rows() == A.cols() && E.rows() == A.rows() && E.cols() == A.cols(),
          ErrorKind::DimensionMismatch, "pencil: A and E must be square of equal order");
  if (A.rows() == 0)
  {
    return CVector(0);
  }
  Eigen::PartialPivLU<CMatrix> lu(E);
  require(lu.rcond() > 1.0e-14, ErrorKind::SingularReducedE, "pencil: E is singular");
  return eig_dense(CMatrix(lu.solve(A))).values;
}

// ---------------------------------------------------------------------------------------
// Orthonormal bases and angles

Orthonormalized<Matrix> orthonormalize(const Matrix &M, double droptol)
{
  return orthonormalize_impl<Matrix>(nullptr, M, droptol);
}

Orthonormalized<CMatrix> orthonormalize(const CMatrix &M, double droptol)
{
  return orthonormalize_impl<CMatrix>(nullptr, M, droptol);
}

Orthonormalized<Matrix> orthonormalize_against(const Matrix &Q, const Matrix &M,
                                               double droptol)
{
  require(Q.rows() == M.rows() || Q.cols() == 0, ErrorKind::DimensionMismatch,
          "orthonormalize_against: row counts differ");
  return orthonormalize_impl<Matrix>(&Q, M, droptol);
}

double principal_angle(const Matrix &U, const Matrix &W) { return principal_angle_impl(U, W); }

double principal_angle(const CMatrix &U, const CMatrix &W)
{
  return principal_angle_impl(U, W);
}

double norm2(const Matrix &M)
{
  if (M.size() == 0)
  {
    return 0.0;
  }
  return Eigen::BDCSVD<Matrix>(M).singularValues()(0);
}

double norm2(const CMatrix &M)
{
  if (M.size() == 0)
  {
    return 0.0;
  }
  return Eigen::BDCSVD<CMatrix>(M).singularValues()(0);
}

}  // namespace lyapkit
