// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LYAPKIT_BENCH_HPP
#define LYAPKIT_BENCH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lyapkit/irka.hpp"
#include "lyapkit/shift_set.hpp"
#include "lyapkit/system.hpp"

namespace lyapkit
{

struct GeneratedProblem
{
  SparseSystem sys;
  std::string label;
  std::uint64_t seed = 0;
  std::optional<Matrix> known_P;
};

// Generated pencils are checked for stability with a dense eigensolver up to this order.
constexpr Index STABILITY_CHECK_LIMIT = 500;

enum class InputProfile
{
  Source,    // unit-norm Gaussian heat sources centred at j / (m + 1)
  Boundary,  // unit vectors e_1, ..., e_m
};

struct DiffusionOptions
{
  bool mass_matrix = false;  // E = tridiag(1/6, 4/6, 1/6) instead of I
  InputProfile input = InputProfile::Source;
  double source_width = 0.05;  // relative to the unit interval
  bool compute_gramian = false;
};

std::string_view to_string(InputProfile profile);
InputProfile parse_input_profile(std::string_view text);

// A = (n+1)^2 tridiag(1, -2, 1) on a uniform grid of (0, 1); B per profile, C = B^T.
GeneratedProblem gen_diffusion_1d(Index n, Index m, const DiffusionOptions &opts = {});

struct RandomOptions
{
  bool nonsymmetric = true;
  bool general_E = false;
  bool compute_gramian = false;
};

// Sparse A whose symmetric part is negative definite by diagonal dominance; optional SPD E.
GeneratedProblem gen_random_stable(Index n, Index m, Index p, std::uint64_t seed,
                                   const RandomOptions &opts = {});

// Dense controllability Gramian; n <= DENSE_GRAMIAN_LIMIT.
Matrix dense_gramian(const SparseSystem &sys);

// Largest |eigenvalue| of a Hermitian matrix by power iteration from a fixed start vector.
double hermitian_norm2(const CMatrix &D, Index max_iter = 500, double tol = 1.0e-12);
double hermitian_norm2(const Matrix &D, Index max_iter = 500, double tol = 1.0e-12);

// ||P - Z Z^H||_2 / ||P||_2.
double relative_gramian_error(const Matrix &P, const CMatrix &Z);

struct Fig1Options
{
  Index q = 4;
  Complex initial_shift = 100.0;
  Index max_iter = 40;
  double shift_tol = 0.0;  // fixed iteration count by default
  double theta_tol = 1.0e-6;
  double plateau_tol = 0.1;
};

struct Fig1Result
{
  IrkaState irka;
  std::optional<double> final_theta;
  double final_rel_error = 0.0;
  double midpoint_rel_error = 0.0;
  bool theta_ok = false;
  bool plateau_ok = false;
  std::string csv;

  bool passed() const { return theta_ok && plateau_ok; }
};

struct Fig2Options
{
  Index total_steps = 120;
  double error_tol = 1.0e-8;
  double theta_min = 1.4;
  Index sweeps_before_theta = 3;
};

struct Fig2Row
{
  Index step = 0;
  Index rank = 0;
  double rel_error = 0.0;
  std::optional<double> theta;  // only where the shift prefix is balanced
};

struct Fig2Result
{
  std::vector<Fig2Row> rows;
  bool error_ok = false;
  bool theta_ok = false;
  bool decay_ok = false;  // final <= initial / 1e3
  std::string csv;

  bool passed() const { return error_ok && theta_ok && decay_ok; }
};

//
// IRKA from q copies of the initial shift; per iteration theta and the relative Gramian error
// of the ADI approximation built from the current shifts. Writes <out>/history.csv and
// <out>/meta.json when out_dir is non-empty.
//
Fig1Result experiment_fig1(const GeneratedProblem &problem, const Fig1Options &opts,
                           const std::string &out_dir = {});

// Cyclic ADI with fixed shifts; per step rank, relative Gramian error and theta.
Fig2Result experiment_fig2(const GeneratedProblem &problem, const ShiftSet &shifts,
                           const Fig2Options &opts, const std::string &out_dir = {});

// Writes text to a file, creating parent directories; throws Io on failure.
void write_text_file(const std::string &path, const std::string &text);

std::string library_version();

}  // namespace lyapkit

#endif  // LYAPKIT_BENCH_HPP
