// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "lyapkit/adi.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "lyapkit/error.hpp"
#include "lyapkit/mmio.hpp"

namespace lyapkit
{

namespace
{


double alpha(Complex shift) { return std::sqrt(2.0 * shift.real()); }

}  // namespace

std::vector<Index> LowRankFactor::block_cols() const
{
  std::vector<Index> cols;
  for (Index i = 0; i <= blocks(); i++)
  {
    cols.push_back(i * block_size);
  }
  return cols;
}

SylvesterData make_sylvester_data(const std::vector<Complex> &shifts, Index m)
{
  const Index k = static_cast<Index>(shifts.size());
  SylvesterData data{CMatrix::Zero(k * m, k * m), Matrix::Zero(m, k * m)};
  for (Index i = 0; i < k; i++)
  {
    const double ai = alpha(shifts[i]);
    data.L.block(0, i * m, m, m).diagonal().setConstant(ai);
    data.S.block(i * m, i * m, m, m).diagonal().setConstant(shifts[i]);
    for (Index j = i + 1; j < k; j++)
    {
      data.S.block(i * m, j * m, m, m).diagonal().setConstant(ai * alpha(shifts[j]));
    }
  }
  return data;
}

double ResidualFactor::norm() const
{
  if (B_perp.size() == 0)
  {
    return 0.0;
  }
  const CMatrix G = B_perp.adjoint() * B_perp;
  return norm2(CMatrix(0.5 * (G + G.adjoint())));
}

std::string ConvergenceHistory::to_csv() const
{
  const bool with_theta =
    std::any_of(records.begin(), records.end(), [](const auto &r) { return r.theta.has_value(); });
  std::ostringstream out;
  out << "step,q,shift_re,shift_im,res_norm,seconds" << (with_theta ? ",theta" : "") << "\n";
  for (const auto &r : records)
  {
    out << r.step << ',' << r.q << ',' << mm::format_double(r.shift.real()) << ','
        << mm::format_double(r.shift.imag()) << ',' << mm::format_double(r.res_norm) << ','
        << mm::format_double(r.seconds);
    if (with_theta)
    {
      out << ',' << (r.theta ? mm::format_double(*r.theta) : std::string());
    }
    out << "\n";
  }
  return out.str();
}

std::string ConvergenceHistory::to_json() const
{
  nlohmann::ordered_json j;
  j["rhs_norm"] = rhs_norm;
  j["converged"] = converged;
  auto &steps = j["steps"] = nlohmann::ordered_json::array();
  for (const auto &r : records)
  {
    nlohmann::ordered_json e;
    e["step"] = r.step;
    e["q"] = r.q;
    e["shift_re"] = r.shift.real();
    e["shift_im"] = r.shift.imag();
    e["res_norm"] = r.res_norm;
    e["seconds"] = r.seconds;
    if (r.theta)
    {
      e["theta"] = *r.theta;
    }
    steps.push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

AdiState::AdiState(const SparseSystem &sys)
  : sys_(&sys), cache_(std::make_shared<FactorizationCache>(sys.A, sys.E)),
    residual_{sys.B.cast<Complex>()}
{
  sys.validate();
}

void AdiState::advance(Complex shift)
{
  require(shift.real() > 0.0, ErrorKind::InvalidArgument,
          "ADI shift must have positive real part, got " + format_complex(shift));
  const auto &lu = cache_->get(shift);
  CMatrix Zi;
  if (blocks_.empty())
  {
    Zi = alpha(shift) * lu.solve(residual_.B_perp);
  }
  else
  {
    const Complex prev = shifts_.back();
    const CMatrix &Zp = blocks_.back();
    Zi = Zp + (shift + std::conj(prev)) * lu.solve(sparse_mul(sys_->E, Zp));
    Zi *= std::sqrt(shift.real() / prev.real());
  }
  residual_.B_perp += alpha(shift) * sparse_mul(sys_->E, Zi);
  blocks_.push_back(std::move(Zi));
  shifts_.push_back(shift);
}

LowRankFactor AdiState::factor() const
{
  const Index n = sys_->order();
  const Index m = sys_->inputs();
  LowRankFactor f{CMatrix(n, m * steps()), m, shifts_};
  for (Index i = 0; i < steps(); i++)
  {
    f.Z.middleCols(i * m, m) = blocks_[i];
  }
  return f;
}

SylvesterData AdiState::sylvester_data() const
{
  return make_sylvester_data(shifts_, sys_->inputs());
}

AdiState adi_step(AdiState state, Complex shift)
{
  state.advance(shift);
  return state;
}

AdiResult run_adi(const SparseSystem &sys, const ShiftSet &shifts, const AdiOptions &opts,
                  const AdiObserver &observer)
{
  require(!shifts.empty(), ErrorKind::InvalidArgument, "run_adi: empty shift set");
  require(opts.max_steps >= 0, ErrorKind::InvalidArgument, "run_adi: negative step budget");
  const auto budget = static_cast<std::size_t>(opts.max_steps);
  const auto schedule = opts.cyclic ? cyclic_schedule(shifts, budget)
                                    : std::vector<Complex>(shifts.begin(),
                                                           shifts.begin() +
                                                             std::min(budget, shifts.size()));
  AdiState state(sys);
  ConvergenceHistory history;
  const Matrix BtB = sys.B.transpose() * sys.B;
  history.rhs_norm = norm2(Matrix(BtB));
  const double target = opts.residual_tol * history.rhs_norm;

  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  for (const auto &shift : schedule)
  {
    state.advance(shift);
    AdiStepRecord rec;
    rec.step = state.steps();
    rec.q = state.steps() * sys.inputs();
    rec.shift = shift;
    rec.res_norm = state.residual().norm();
    if (opts.record_time)
    {
      rec.seconds = std::chrono::duration<double>(clock::now() - start).count();
    }
    if (observer)
    {
      observer(state, rec);
    }
    history.records.push_back(rec);
    if (rec.res_norm <= target)
    {
      history.converged = true;
      break;
    }
  }
  return AdiResult{state.factor(), state.sylvester_data(), state.residual(), std::move(history)};
}

double verify_sylvester(const SparseSystem &sys, const LowRankFactor &factor,
                        const SylvesterData &data)
{
  if (factor.rank() == 0)
  {
    return 0.0;
  }
  require(data.S.rows() == factor.rank() && data.S.cols() == factor.rank() &&
            data.L.cols() == factor.rank() && data.L.rows() == sys.inputs() &&
            factor.Z.rows() == sys.order(),
          ErrorKind::DimensionMismatch, "verify_sylvester: inconsistent dimensions");
  const CMatrix BL = sys.B.cast<Complex>() * data.L;
  const CMatrix R = sparse_mul(sys.A, factor.Z) - sparse_mul(sys.E, factor.Z * data.S) - BL;
  const double scale = BL.norm();
  return scale > 0.0 ? R.norm() / scale : R.norm();
}

double verify_sylvester(const SparseSystem &sys, const Matrix &Z, const Matrix &S,
                        const Matrix &L)
{
  if (Z.cols() == 0)
  {
    return 0.0;
  }
  require(S.rows() == Z.cols() && S.cols() == Z.cols() && L.cols() == Z.cols() &&
            L.rows() == sys.inputs() && Z.rows() == sys.order(),
          ErrorKind::DimensionMismatch, "verify_sylvester: inconsistent dimensions");
  const Matrix BL = sys.B * L;
  const Matrix R = sys.A * Z - sys.E * (Z * S) - BL;
  const double scale = BL.norm();
  return scale > 0.0 ? R.norm() / scale : R.norm();
}

CMatrix explicit_residual(const SparseSystem &sys, const CMatrix &Z)
{
  require(sys.order() <= DENSE_RESIDUAL_LIMIT, ErrorKind::DimensionTooLarge,
          "explicit residual needs n <= " + std::to_string(DENSE_RESIDUAL_LIMIT));
  require(Z.rows() == sys.order(), ErrorKind::DimensionMismatch,
          "explicit residual: Z has wrong row count");
  CMatrix R = (sys.B * sys.B.transpose()).cast<Complex>();
  if (Z.cols() > 0)
  {
    const CMatrix AZ = sparse_mul(sys.A, Z);
    const CMatrix EZ = sparse_mul(sys.E, Z);
    R += AZ * EZ.adjoint() + EZ * AZ.adjoint();
  }
  return R;
}

double explicit_residual_norm(const SparseSystem &sys, const CMatrix &Z)
{
  return norm2(explicit_residual(sys, Z));
}

namespace
{

// Pairwise recipe: requires every complex shift to be followed directly by its conjugate.
std::optional<std::pair<Matrix, CMatrix>> structured_basis(const LowRankFactor &f)
{
  const Index m = f.block_size;
  const Index k = f.blocks();
  const double r2 = std::sqrt(0.5);
  Matrix Zs(f.Z.rows(), f.Z.cols());
  CMatrix R = CMatrix::Zero(f.Z.cols(), f.Z.cols());
  const CMatrix I = CMatrix::Identity(m, m);
  Index i = 0;
  while (i < k)
  {
    const Complex s = f.shift_of_block[i];
    const auto Zi = f.Z.middleCols(i * m, m);
    if (s.imag() == 0.0)
    {
      Zs.middleCols(i * m, m) = Zi.real();
      R.block(i * m, i * m, m, m) = I;
      i += 1;
      continue;
    }
    if (i + 1 >= k || !is_conjugate(s, f.shift_of_block[i + 1]) ||
        f.shift_of_block[i + 1].imag() == 0.0)
    {
      return std::nullopt;
    }
    const double delta = s.real() / s.imag();
    Zs.middleCols(i * m, m) = std::sqrt(2.0) * Zi.real();
    Zs.middleCols((i + 1) * m, m) = std::sqrt(2.0) * Zi.imag();
    R.block(i * m, i * m, m, m) = r2 * I;
    R.block((i + 1) * m, i * m, m, m) = Complex(0.0, r2) * I;
    R.block(i * m, (i + 1) * m, m, m) = r2 * I;
    R.block((i + 1) * m, (i + 1) * m, m, m) = Complex(2.0 * delta * r2, -r2) * I;
    i += 2;
  }
  return std::make_pair(std::move(Zs), std::move(R));
}

}  // namespace

RealAdiData realify(const LowRankFactor &factor, const SylvesterData &data)
{
  require(balanced_prefix(factor.shift_of_block, factor.shift_of_block.size()),
          ErrorKind::NotConjugationClosed,
          "realify: every complex shift must be used as often as its conjugate");
  const Index q = factor.rank();
  RealAdiData out;
  if (auto basis = structured_basis(factor))
  {
    out.Zs = std::move(basis->first);
    out.R = std::move(basis->second);
    out.structured = true;
  }
  else
  {
    Matrix split(factor.Z.rows(), 2 * q);
    split << factor.Z.real(), factor.Z.imag();
    auto Q = orthonormalize(split, Tolerances::krylov_drop).Q;
    require(Q.cols() == q, ErrorKind::NotConjugationClosed,
            "realify: real span of Z has dimension " + std::to_string(Q.cols()) + ", expected " +
              std::to_string(q));
    out.R = Q.transpose().cast<Complex>() * factor.Z;
    out.Zs = std::move(Q);
  }
  Eigen::PartialPivLU<CMatrix> lu(out.R);
  const CMatrix Rinv = lu.inverse();
  out.S = (out.R * data.S * Rinv).real();
  out.L = (data.L.cast<Complex>() * Rinv).real();
  const CMatrix W = out.R * out.R.adjoint();
  out.W = 0.5 * (W.real() + W.real().transpose());
  return out;
}

}  // namespace lyapkit
