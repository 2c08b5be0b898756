// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LYAPKIT_ADI_HPP
#define LYAPKIT_ADI_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lyapkit/linalg.hpp"
#include "lyapkit/shift_set.hpp"
#include "lyapkit/system.hpp"

namespace lyapkit
{

//
// Low-rank factor Z = [Z_1, ..., Z_k] of the ADI approximation P_hat = Z Z^H. Block i has m
// columns and was generated with shift_of_block[i].
//
struct LowRankFactor
{
  CMatrix Z;
  Index block_size = 0;
  std::vector<Complex> shift_of_block;

  Index rank() const { return Z.cols(); }
  Index blocks() const { return static_cast<Index>(shift_of_block.size()); }
  // First column of each block, plus the total column count at the end.
  std::vector<Index> block_cols() const;
};

// (S, L) with A Z - E Z S = B L.
struct SylvesterData
{
  CMatrix S;
  Matrix L;
};

// S has sigma_i I on the diagonal and alpha_i alpha_j I above it; L = [alpha_1 I, ...].
SylvesterData make_sylvester_data(const std::vector<Complex> &shifts, Index m);

// R = B_perp B_perp^H is the exact Lyapunov residual of the current approximation.
struct ResidualFactor
{
  CMatrix B_perp;

  // ||R||_2 evaluated as ||B_perp^H B_perp||_2.
  double norm() const;
};

struct AdiStepRecord
{
  Index step = 0;
  Index q = 0;
  Complex shift;
  double res_norm = 0.0;
  double seconds = 0.0;
  std::optional<double> theta;
};

struct ConvergenceHistory
{
  std::vector<AdiStepRecord> records;
  double rhs_norm = 0.0;  // ||B^T B||_2
  bool converged = false;

  std::string to_csv() const;
  std::string to_json() const;
};

//
// Sequential ADI state. Each advance() consumes one shift, appends one block to Z and updates
// the residual factor. Factorizations are cached per distinct shift.
//
class AdiState
{
public:
  explicit AdiState(const SparseSystem &sys);

  void advance(Complex shift);

  Index steps() const { return static_cast<Index>(shifts_.size()); }
  const std::vector<Complex> &shifts() const { return shifts_; }
  const SparseSystem &system() const { return *sys_; }

  LowRankFactor factor() const;
  const ResidualFactor &residual() const { return residual_; }
  SylvesterData sylvester_data() const;
  std::size_t factorizations() const { return cache_->size(); }

private:
  const SparseSystem *sys_;
  std::shared_ptr<FactorizationCache> cache_;
  std::vector<CMatrix> blocks_;
  std::vector<Complex> shifts_;
  ResidualFactor residual_;
};

AdiState adi_step(AdiState state, Complex shift);

struct AdiOptions
{
  Index max_steps = 200;
  double residual_tol = Tolerances::adi_residual;
  bool cyclic = false;
  bool record_time = false;
};

struct AdiResult
{
  LowRankFactor factor;
  SylvesterData data;
  ResidualFactor residual;
  ConvergenceHistory history;
};

// Called after every step; may fill in record.theta.
using AdiObserver = std::function<void(const AdiState &, AdiStepRecord &)>;

//
// Runs ADI over the shift sequence. Without cyclic, at most |shifts| steps are taken. The run
// stops once ||R||_2 <= residual_tol ||B^T B||_2 or the step budget is used up.
//
AdiResult run_adi(const SparseSystem &sys, const ShiftSet &shifts, const AdiOptions &opts = {},
                  const AdiObserver &observer = {});

// ||A Z - E Z S - B L||_F / ||B L||_F; 0 for an empty factor.
double verify_sylvester(const SparseSystem &sys, const LowRankFactor &factor,
                        const SylvesterData &data);
double verify_sylvester(const SparseSystem &sys, const Matrix &Z, const Matrix &S,
                        const Matrix &L);

// Dense residual A Z Z^H E^T + E Z Z^H A^T + B B^T; n <= 500.
constexpr Index DENSE_RESIDUAL_LIMIT = 500;
CMatrix explicit_residual(const SparseSystem &sys, const CMatrix &Z);
double explicit_residual_norm(const SparseSystem &sys, const CMatrix &Z);

//
// Real representation of an ADI factor: Z = Zs R with real Zs, and the transformed Sylvester
// data S_s = R S R^{-1}, L_s = L R^{-1}. Z Z^H = Zs W Zs^T with W = R R^H real.
//
struct RealAdiData
{
  Matrix Zs;
  Matrix S;
  Matrix L;
  CMatrix R;
  Matrix W;
  bool structured = false;  // pairwise block recipe (true) or orthonormal fallback
};

RealAdiData realify(const LowRankFactor &factor, const SylvesterData &data);

}  // namespace lyapkit

#endif  // LYAPKIT_ADI_HPP
