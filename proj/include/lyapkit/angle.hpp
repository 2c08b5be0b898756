// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LYAPKIT_ANGLE_HPP
#define LYAPKIT_ANGLE_HPP

#include <optional>
#include <string>

#include "lyapkit/adi.hpp"
#include "lyapkit/rksm.hpp"

namespace lyapkit
{

// B - E V (V^H E V)^{-1} V^H B for a basis V (real or complex, any column scaling).
CMatrix b_perp_EV(const SparseSystem &sys, const CMatrix &V);
Matrix b_perp_EV(const SparseSystem &sys, const KrylovBasis &basis);

enum class AngleStatus
{
  Ok,
  Converged,  // B_perp is numerically zero; theta undefined
  Invariant,  // the basis spans the whole space or B_perp,EV vanishes; theta = 0
};

struct ObliquenessReport
{
  std::optional<double> theta;
  Index q = 0;
  std::string shift_set_id;
  AngleStatus status = AngleStatus::Ok;
};

std::string_view to_string(AngleStatus status);

// Relative size below which B_perp counts as zero.
constexpr double ANGLE_ZERO_TOL = 1.0e-13;

//
// Largest principal angle between colsp(B_perp,EV) and colsp(B_perp), where B_perp,EV is built
// from the span of `basis`. The basis is orthonormalized internally.
//
ObliquenessReport obliqueness(const SparseSystem &sys, const CMatrix &basis,
                              const ResidualFactor &residual, const std::string &label = {});

}  // namespace lyapkit

#endif  // LYAPKIT_ANGLE_HPP
