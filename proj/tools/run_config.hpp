// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LYAPKIT_TOOLS_RUN_CONFIG_HPP
#define LYAPKIT_TOOLS_RUN_CONFIG_HPP

#include <cstdint>
#include <string>

#include "lyapkit/types.hpp"

namespace lyapkit::cli
{

enum ExitCode : int
{
  EXIT_PASS = 0,
  EXIT_OPERATIONAL = 1,
  EXIT_BUDGET = 2,
  EXIT_VERIFY_FAILED = 3,
};

//
// Every parameter of every subcommand. Defaults live here and nowhere else; the resolved
// config is echoed into meta.json.
//
struct RunConfig
{
  std::string command;

  // System: Matrix Market files, or a generator when no A is given.
  std::string E_path;
  std::string A_path;
  std::string B_path;
  std::string C_path;
  std::string generator;  // "", "diffusion", "random"
  Index n = 400;
  Index m = 1;
  Index p = 1;
  std::uint64_t seed = 1;
  bool mass_matrix = false;
  std::string input_profile = "source";
  double source_width = 0.05;
  bool nonsymmetric = true;
  bool general_E = false;

  // Shift source: explicit list, file, or IRKA.
  std::string shifts;
  std::string shift_file;
  bool irka_shifts = false;
  Index q = 4;
  std::string init = "100";
  Index irka_max_iter = 40;
  double irka_tol = 1.0e-6;
  bool monitor = false;

  // ADI and projection.
  double tol = 1.0e-8;
  Index max_steps = 200;
  bool cyclic = false;
  bool timing = false;
  bool oblique = false;
  double krylov_drop = 1.0e-10;

  // Reduced models and H2 verification.
  std::string from_dir;
  std::string rom_path;
  Index samples = 20;
  double orthogonality_tol = 1.0e-8;
  double pythagoras_tol = 1.0e-6;
  double perturb = 0.0;

  // Experiments.
  int fig = 1;
  Index total_steps = 120;

  std::string out_dir = "lyapkit-out";

  bool operator==(const RunConfig &) const = default;

  std::string to_json() const;
  // Keys absent from the text keep their defaults.
  static RunConfig from_json(const std::string &text);
  static RunConfig load(const std::string &path);
};

}  // namespace lyapkit::cli

#endif  // LYAPKIT_TOOLS_RUN_CONFIG_HPP
