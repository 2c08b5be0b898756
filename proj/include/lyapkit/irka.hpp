// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LYAPKIT_IRKA_HPP
#define LYAPKIT_IRKA_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lyapkit/rksm.hpp"

namespace lyapkit
{

struct IrkaOptions
{
  Index max_iter = 40;
  // Stop once the relative shift movement is at most shift_tol; 0 runs all max_iter iterations.
  double shift_tol = 1.0e-6;
  KrylovOptions krylov;
};

struct IrkaRecord
{
  Index iteration = 0;
  std::vector<Complex> shifts;  // shifts produced by this iteration
  double movement = 0.0;
  Index reflected = 0;  // mirrored poles that had to be reflected into the right half-plane
  std::optional<double> theta;
  std::optional<double> rel_error;
};

enum class IrkaStatus
{
  Converged,
  MaxIterations,
};

struct IrkaState
{
  ShiftSet current_shifts;
  Index iteration = 0;
  double shift_movement = 0.0;
  IrkaStatus status = IrkaStatus::MaxIterations;
  std::vector<IrkaRecord> history;

  Index reflected_total() const;
  std::string to_csv() const;
};

// Called once per iteration with the new shifts; may fill theta and rel_error.
using IrkaObserver = std::function<void(const SparseSystem &, IrkaRecord &)>;

// Max over old shifts of |new - old| / |old| after greedy nearest-neighbour matching.
double shift_movement(const std::vector<Complex> &old_shifts,
                      const std::vector<Complex> &new_shifts);

// -eig(E_q^{-1} A_q) sorted by (real, imag) with conjugate pairs made exact; poles in the
// closed right half-plane are reflected and counted.
std::vector<Complex> mirrored_shifts(const Matrix &A_q, const Matrix &E_q, Index *reflected);

//
// One-sided IRKA for single-input systems: V from the current shifts, Galerkin pencil (V^T A V, V^T E V), new shifts
// from its mirrored eigenvalues. q must equal |initial| * m.
//
IrkaState irka_one_sided(const SparseSystem &sys, const ShiftSet &initial, Index q,
                         const IrkaOptions &opts = {}, const IrkaObserver &observer = {});

//
// Observer that runs ADI with the new shifts and records theta and, when a reference Gramian
// is given, ||P - Z Z^H||_2 / ||P||_2.
//
IrkaObserver make_irka_monitor(const Matrix *reference_P);

}  // namespace lyapkit

#endif  // LYAPKIT_IRKA_HPP
