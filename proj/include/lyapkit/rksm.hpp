// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LYAPKIT_RKSM_HPP
#define LYAPKIT_RKSM_HPP

#include "lyapkit/linalg.hpp"
#include "lyapkit/shift_set.hpp"
#include "lyapkit/system.hpp"

namespace lyapkit
{

struct KrylovOptions
{
  double drop_tol = Tolerances::krylov_drop;
  // A shift occurring j times contributes (A - sE)^{-1} (E (A - sE)^{-1})^{j-1} B for its j-th
  // occurrence, matching the ADI span. When false repeated occurrences are skipped and counted
  // as dropped columns.
  bool higher_order_repeats = true;
};

//
// Real orthonormal basis of the rational block Krylov space spanned by (A - s_i E)^{-1} B.
// A complex shift with positive imaginary part contributes the real and imaginary parts of its
// solve; its conjugate contributes nothing further.
//
struct KrylovBasis
{
  Matrix V;
  ShiftSet shifts;
  Index dropped_cols = 0;

  Index rank() const { return V.cols(); }
};

KrylovBasis build_krylov_basis(const SparseSystem &sys, const ShiftSet &shifts,
                               const KrylovOptions &opts = {});

enum class Projection
{
  Galerkin,
  Supplied,
};

//
// Projected Lyapunov equation A_q P_q E_q^T + E_q P_q A_q^T + B_q B_q^T = 0 with
// A_q = W^T A V, E_q = W^T E V, B_q = W^T B. The approximation is P_hat = V P_q V^T.
//
struct ProjectedLyapunov
{
  Matrix A_q;
  Matrix E_q;
  Matrix B_q;
  Matrix P_q;
  Projection W_used = Projection::Galerkin;

  // F with V P_q V^T = F F^T; eigenvalues of P_q below zero are clipped.
  Matrix low_rank_factor(const Matrix &V) const;
  Matrix approximation(const Matrix &V) const;
};

// Eager stability check of the projected pencil is performed for q <= this order.
constexpr Index PROJECTED_STABILITY_LIMIT = 500;

ProjectedLyapunov galerkin_lyapunov(const SparseSystem &sys, const KrylovBasis &basis);
ProjectedLyapunov petrov_galerkin_lyapunov(const SparseSystem &sys, const KrylovBasis &basis,
                                           const Matrix &W);

}  // namespace lyapkit

#endif  // LYAPKIT_RKSM_HPP
