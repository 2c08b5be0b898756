// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LYAPKIT_PORK_HPP
#define LYAPKIT_PORK_HPP

#include <optional>
#include <string>

#include "lyapkit/adi.hpp"
#include "lyapkit/rksm.hpp"

namespace lyapkit
{

//
// Dense reduced model (E_q, A_q, B_q, C_q) with its reduced Gramian P_q and the basis it is
// expressed against, so that P_hat = basis P_q basis^H. Complex storage covers models built
// from unbalanced shift sets; to_real() is available when all parts are real.
//
struct ReducedModel
{
  CMatrix E;
  CMatrix A;
  CMatrix B;
  CMatrix C;  // p x q; zero rows when no output map was supplied
  CMatrix P;
  CVector poles;  // eigenvalues of E^{-1} A sorted by (real, imag)
  CMatrix basis;  // n x q; may be empty for models read from disk
  std::string source;

  Index order() const { return A.rows(); }
  bool has_output() const { return C.rows() > 0; }
  bool is_real(double tol = 1.0e-10) const;
  DenseSystem to_real(double tol = 1.0e-10) const;
  // basis P basis^H.
  CMatrix gramian_approximation() const;
  // Residual of A P E^H + E P A^H + B B^H relative to ||B B^H||.
  double lyapunov_residual() const;
};

// Sorted eigenvalues of E^{-1} A.
CVector model_poles(const CMatrix &A, const CMatrix &E);

//
// Closed form in ADI coordinates: E_q = I, A_q = S - L^T L, B_q = -L^T, C_q = C Z, P_q = I.
// The poles are the mirrored shifts -conj(sigma_i).
//
ReducedModel pork_from_adi(const LowRankFactor &factor, const SylvesterData &data,
                           const std::optional<Matrix> &C = std::nullopt);

// Same model in the real coordinates produced by realify.
ReducedModel pork_from_adi_real(const LowRankFactor &factor, const SylvesterData &data,
                                const std::optional<Matrix> &C = std::nullopt);

//
// Pseudo-optimal model for a basis V with A V - E V S = B L. With Q solving
// Q S + S^H Q = L^H L: E_q = Q, A_q = Q S - L^H L, B_q = -L^H, C_q = C V, P_q = Q^{-1}.
//
ReducedModel pork_from_sylvester(const SparseSystem &sys, const CMatrix &V, const CMatrix &S,
                                 const CMatrix &L,
                                 const std::optional<Matrix> &C = std::nullopt);

// min over eigenvalues l of S of sigma_min([S - l I; L]) relative to ||[S; L]||.
double observability_margin(const CMatrix &S, const CMatrix &L);
constexpr double OBSERVABILITY_TOL = 1.0e-10;

struct ObliqueProjector
{
  Matrix W;
  bool rank_deficient = false;  // [E V, B] has rank below q + m
  double condition_defect = 0.0;  // ||W^T (B - E V E_q^{-1} B_q)|| / (||W|| ||B||)
};

// Tolerance for the least-squares fit Z = V T used by construct_W.
constexpr double BASIS_FIT_TOL = 1.0e-8;

//
// Test space W = [E V, B] K with K spanning the null space of M^T,
// M = [E V, B]^T (B - E V E_q^{-1} B_q). rom.basis must span the same space as V.
//
ObliqueProjector construct_W(const SparseSystem &sys, const KrylovBasis &basis,
                             const ReducedModel &rom);

}  // namespace lyapkit

#endif  // LYAPKIT_PORK_HPP
