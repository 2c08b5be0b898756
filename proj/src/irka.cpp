// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "lyapkit/irka.hpp"

#include <sstream>

#include "lyapkit/adi.hpp"
#include "lyapkit/angle.hpp"
#include "lyapkit/bench.hpp"
#include "lyapkit/error.hpp"
#include "lyapkit/mmio.hpp"

namespace lyapkit
{

Index IrkaState::reflected_total() const
{
  Index total = 0;
  for (const auto &r : history)
  {
    total += r.reflected;
  }
  return total;
}

std::string IrkaState::to_csv() const
{
  std::ostringstream out;
  const std::size_t k = current_shifts.size();
  out << "iteration";
  for (std::size_t i = 1; i <= k; i++)
  {
    out << ",shift" << i << "_re,shift" << i << "_im";
  }
  out << ",movement,theta,rel_error\n";
  for (const auto &r : history)
  {
    out << r.iteration;
    for (const auto &s : r.shifts)
    {
      out << ',' << mm::format_double(s.real()) << ',' << mm::format_double(s.imag());
    }
    out << ',' << mm::format_double(r.movement) << ','
        << (r.theta ? mm::format_double(*r.theta) : std::string()) << ','
        << (r.rel_error ? mm::format_double(*r.rel_error) : std::string()) << "\n";
  }
  return out.str();
}

double shift_movement(const std::vector<Complex> &old_shifts,
                      const std::vector<Complex> &new_shifts)
{
  require(old_shifts.size() == new_shifts.size(), ErrorKind::DimensionMismatch,
          "shift_movement: shift counts differ");
  std::vector<bool> used(new_shifts.size(), false);
  double worst = 0.0;
  for (const auto &s : old_shifts)
  {
    std::size_t best = 0;
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < new_shifts.size(); j++)
    {
      if (!used[j] && std::abs(new_shifts[j] - s) < dist)
      {
        dist = std::abs(new_shifts[j] - s);
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, dist / std::abs(s));
  }
  return worst;
}

std::vector<Complex> mirrored_shifts(const Matrix &A_q, const Matrix &E_q, Index *reflected)
{
  const CVector poles = pencil_eigenvalues(A_q, E_q);
  std::vector<Complex> shifts;
  Index flips = 0;
  for (Index i = 0; i < poles.size(); i++)
  {
    Complex s = -poles(i);
    if (s.real() <= 0.0)
    {
      s = Complex(-s.real(), s.imag());
      flips++;
    }
    require(s.real() > 0.0, ErrorKind::UnstableProjectedPencil,
            "projected pencil has a pole on the imaginary axis");
    shifts.push_back(s);
  }
  std::sort(shifts.begin(), shifts.end(), [](const Complex &a, const Complex &b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  // Make conjugate pairs exact: (x - yi, x + yi) are adjacent after sorting.
  for (std::size_t i = 0; i + 1 < shifts.size(); i++)
  {
    if (shifts[i].imag() < 0.0 && is_conjugate(shifts[i], shifts[i + 1], 1.0e-8))
    {
      shifts[i + 1] = std::conj(shifts[i]);
      i++;
    }
  }
  if (reflected)
  {
    *reflected = flips;
  }
  return shifts;
}

IrkaState irka_one_sided(const SparseSystem &sys, const ShiftSet &initial, Index q,
                         const IrkaOptions &opts, const IrkaObserver &observer)
{
  sys.validate();
  require(sys.inputs() == 1, ErrorKind::InvalidArgument,
          "irka: only single-input systems are supported");
  require(!initial.empty() && q == static_cast<Index>(initial.size()) * sys.inputs(),
          ErrorKind::InvalidArgument, "irka: q must equal the number of shifts times m");
  require(opts.max_iter >= 1, ErrorKind::InvalidArgument, "irka: max_iter must be positive");
  IrkaState state;
  state.current_shifts = initial;
  for (Index it = 1; it <= opts.max_iter; it++)
  {
    const KrylovBasis basis = build_krylov_basis(sys, state.current_shifts, opts.krylov);
    require(basis.rank() == q, ErrorKind::UnstableProjectedPencil,
            "irka: Krylov basis lost rank (" + std::to_string(basis.rank()) + " of " +
              std::to_string(q) + ")");
    const Matrix A_q = basis.V.transpose() * (sys.A * basis.V);
    const Matrix E_q = basis.V.transpose() * (sys.E * basis.V);
    Index reflected = 0;
    const auto next = mirrored_shifts(A_q, E_q, &reflected);
    IrkaRecord rec;
    rec.iteration = it;
    rec.shifts = next;
    rec.reflected = reflected;
    rec.movement = shift_movement(state.current_shifts.values(), next);
    state.current_shifts = ShiftSet(next);
    state.iteration = it;
    state.shift_movement = rec.movement;
    if (observer)
    {
      observer(sys, rec);
    }
    state.history.push_back(rec);
    if (opts.shift_tol > 0.0 && rec.movement <= opts.shift_tol)
    {
      state.status = IrkaStatus::Converged;
      break;
    }
  }
  return state;
}

IrkaObserver make_irka_monitor(const Matrix *reference_P)
{
  return [reference_P](const SparseSystem &sys, IrkaRecord &rec) {
    AdiOptions adi;
    adi.max_steps = static_cast<Index>(rec.shifts.size());
    adi.residual_tol = 0.0;
    const auto run = run_adi(sys, ShiftSet(rec.shifts), adi);
    const auto report = obliqueness(sys, run.factor.Z, run.residual);
    rec.theta = report.theta;
    if (reference_P)
    {
      rec.rel_error = relative_gramian_error(*reference_P, run.factor.Z);
    }
  };
}

}  // namespace lyapkit
