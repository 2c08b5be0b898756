// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string>
#include <string_view>

#include <CLI11.hpp>

#include "commands.hpp"
#include "lyapkit/bench.hpp"
#include "run_config.hpp"

using lyapkit::cli::RunConfig;

namespace
{

// --config is read before the parser is built so that file values become the defaults and
// explicit flags still override them.
std::string find_config_path(int argc, char **argv)
{
  for (int i = 1; i < argc; i++)
  {
    const std::string_view arg = argv[i];
    if (arg == "--config" && i + 1 < argc)
    {
      return argv[i + 1];
    }
    if (arg.starts_with("--config="))
    {
      return std::string(arg.substr(9));
    }
  }
  return {};
}

void add_common(CLI::App *cmd, RunConfig &c, std::string &config_path, bool &dump)
{
  cmd->add_option("--config", config_path, "Load parameters from a JSON config")
    ->check(CLI::ExistingFile);
  cmd->add_flag("--dump-config", dump, "Print the resolved config as JSON and exit");
  cmd->add_option("--out", c.out_dir, "Output directory");
}

void add_system(CLI::App *cmd, RunConfig &c)
{
  auto *g = cmd->add_option_group("System");
  g->add_option("--A", c.A_path, "Matrix Market file for A");
  g->add_option("--E", c.E_path, "Matrix Market file for E (identity when omitted)");
  g->add_option("--B", c.B_path, "Matrix Market file for B");
  g->add_option("--C", c.C_path, "Matrix Market file for C");
  g->add_option("--gen", c.generator, "Generator used when --A is absent (diffusion|random)");
  g->add_option("--n", c.n, "Generator order")->check(CLI::PositiveNumber);
  g->add_option("--m", c.m, "Generator input count")->check(CLI::PositiveNumber);
  g->add_option("--p", c.p, "Generator output count (random)")->check(CLI::PositiveNumber);
  g->add_option("--seed", c.seed, "Seed for generators and sampling");
  g->add_flag("--mass", c.mass_matrix, "Diffusion: tridiagonal mass matrix E");
  g->add_option("--input", c.input_profile, "Diffusion input profile (source|boundary)");
  g->add_option("--width", c.source_width, "Diffusion source width")
    ->check(CLI::PositiveNumber);
  g->add_flag("--nonsymmetric,!--symmetric", c.nonsymmetric, "Random: nonsymmetric A");
  g->add_flag("--general-E", c.general_E, "Random: SPD E instead of I");
}

void add_irka_params(CLI::App *cmd, RunConfig &c)
{
  auto *g = cmd->add_option_group("IRKA");
  g->add_option("--q", c.q, "Reduced order")->check(CLI::PositiveNumber);
  g->add_option("--init", c.init, "Initial shift, or a list of q/m shifts");
  g->add_option("--irka-max-iter", c.irka_max_iter, "IRKA iteration limit")
    ->check(CLI::PositiveNumber);
  g->add_option("--irka-tol", c.irka_tol, "IRKA relative shift movement tolerance (0: run all)");
  g->add_option("--krylov-drop", c.krylov_drop, "Krylov basis column drop tolerance");
}

void add_shifts(CLI::App *cmd, RunConfig &c)
{
  auto *g = cmd->add_option_group("Shifts");
  g->add_option("--shifts", c.shifts, "Shift list, e.g. 1,2+1i,2-1i");
  g->add_option("--shift-file", c.shift_file, "File with shifts separated by commas or newlines");
  g->add_flag("--irka", c.irka_shifts, "Compute shifts with IRKA (see --q, --init)");
}

void add_adi(CLI::App *cmd, RunConfig &c)
{
  auto *g = cmd->add_option_group("ADI");
  g->add_option("--tol", c.tol, "Relative residual tolerance");
  g->add_option("--max-steps", c.max_steps, "Step budget")->check(CLI::PositiveNumber);
  g->add_flag("--cyclic", c.cyclic, "Reuse the shifts cyclically");
  g->add_flag("--timing", c.timing, "Record wall time per step (breaks byte-identical output)");
}

}  // namespace

int main(int argc, char **argv)
{
  RunConfig c;
  const std::string preset = find_config_path(argc, argv);
  if (!preset.empty())
  {
    try
    {
      c = RunConfig::load(preset);
    }
    catch (const std::exception &e)
    {
      std::cerr << "lyapkit: " << e.what() << "\n";
      return lyapkit::cli::EXIT_OPERATIONAL;
    }
  }

  CLI::App app{"Low-rank ADI and rational Krylov solvers for generalized Lyapunov equations"};
  app.set_version_flag("--version", lyapkit::library_version());
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  std::string config_path;
  bool dump = false;

  auto *adi = app.add_subcommand("solve-adi", "Low-rank ADI solve; writes Z, S, L, B_perp");
  add_common(adi, c, config_path, dump);
  add_system(adi, c);
  add_shifts(adi, c);
  add_irka_params(adi, c);
  add_adi(adi, c);

  auto *rksm = app.add_subcommand("solve-rksm", "Rational Krylov projection solve; writes V, P_q");
  add_common(rksm, c, config_path, dump);
  add_system(rksm, c);
  add_shifts(rksm, c);
  add_irka_params(rksm, c);
  rksm->add_flag("--oblique", c.oblique, "Petrov-Galerkin projection matching ADI");

  auto *pork = app.add_subcommand("pork", "Reduced model implicitly computed by ADI; writes rom.json");
  add_common(pork, c, config_path, dump);
  add_system(pork, c);
  add_shifts(pork, c);
  add_irka_params(pork, c);
  add_adi(pork, c);
  pork->add_option("--from", c.from_dir, "Read Z.mtx, S.mtx, L.mtx from a solve-adi output");
  pork->add_option("--rom", c.rom_path, "Reduced model path (default <out>/rom.json)");

  auto *h2 = app.add_subcommand("verify-h2", "Check H2 pseudo-optimality of a reduced model");
  add_common(h2, c, config_path, dump);
  add_system(h2, c);
  h2->add_option("--rom", c.rom_path, "Reduced model path (default <out>/rom.json)");
  h2->add_option("--samples", c.samples, "Number of perturbation samples")
    ->check(CLI::PositiveNumber);
  h2->add_option("--orth-tol", c.orthogonality_tol, "Relative orthogonality tolerance");
  h2->add_option("--pyth-tol", c.pythagoras_tol, "Relative Pythagoras tolerance");
  h2->add_option("--perturb", c.perturb, "Perturb the model input map by this relative amount");

  auto *angle = app.add_subcommand("angle", "Subspace angle shift-optimality estimate");
  add_common(angle, c, config_path, dump);
  add_system(angle, c);
  add_shifts(angle, c);
  add_irka_params(angle, c);
  add_adi(angle, c);

  auto *irka = app.add_subcommand("irka", "One-sided IRKA shift computation; writes shifts.txt");
  add_common(irka, c, config_path, dump);
  add_system(irka, c);
  add_irka_params(irka, c);
  irka->add_flag("--monitor", c.monitor, "Record theta and the dense Gramian error per iteration");

  auto *exp = app.add_subcommand("experiment", "Shift optimality experiments on a diffusion problem");
  add_common(exp, c, config_path, dump);
  add_system(exp, c);
  add_irka_params(exp, c);
  auto *eg = exp->add_option_group("Experiment");
  eg->add_option("--fig", c.fig, "1: IRKA history, 2: cyclic ADI with the IRKA shifts")
    ->check(CLI::IsMember({1, 2}));
  eg->add_option("--total-steps", c.total_steps, "ADI steps for --fig 2")
    ->check(CLI::PositiveNumber);
  eg->add_option("--shifts", c.shifts, "Shifts for --fig 2 (default: computed by IRKA)");
  eg->add_option("--shift-file", c.shift_file, "Shift file for --fig 2");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? lyapkit::cli::EXIT_PASS : lyapkit::cli::EXIT_OPERATIONAL;
  }

  c.command = app.get_subcommands().front()->get_name();
  if (dump)
  {
    std::cout << c.to_json() << "\n";
    return lyapkit::cli::EXIT_PASS;
  }
  return lyapkit::cli::run_command(c);
}
