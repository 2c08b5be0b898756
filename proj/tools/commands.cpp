// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "lyapkit/adi.hpp"
#include "lyapkit/angle.hpp"
#include "lyapkit/bench.hpp"
#include "lyapkit/error.hpp"
#include "lyapkit/h2.hpp"
#include "lyapkit/irka.hpp"
#include "lyapkit/mmio.hpp"
#include "lyapkit/pork.hpp"
#include "lyapkit/rksm.hpp"
#include "lyapkit/rom_io.hpp"

namespace lyapkit::cli
{

namespace
{

using json = nlohmann::ordered_json;

std::string out_path(const RunConfig &c, const std::string &name)
{
  return c.out_dir + "/" + name;
}

std::string read_text(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GeneratedProblem load_problem(const RunConfig &c, bool default_diffusion = false)
{
  if (!c.A_path.empty())
  {
    require(!c.B_path.empty(), ErrorKind::InvalidArgument, "--B is required together with --A");
    SparseMatrix A = mm::read_sparse(c.A_path);
    SparseMatrix E = c.E_path.empty() ? sparse_identity(A.rows()) : mm::read_sparse(c.E_path);
    Matrix B = mm::read_dense(c.B_path);
    std::optional<Matrix> C;
    if (!c.C_path.empty())
    {
      C = mm::read_dense(c.C_path);
    }
    GeneratedProblem gp{make_system(std::move(E), std::move(A), std::move(B), std::move(C)),
                        "files(A=" + c.A_path + ")", c.seed, std::nullopt};
    return gp;
  }
  const std::string gen = c.generator.empty() && default_diffusion ? "diffusion" : c.generator;
  if (gen == "diffusion")
  {
    DiffusionOptions o;
    o.mass_matrix = c.mass_matrix;
    o.input = parse_input_profile(c.input_profile);
    o.source_width = c.source_width;
    return gen_diffusion_1d(c.n, c.m, o);
  }
  if (gen == "random")
  {
    RandomOptions o;
    o.nonsymmetric = c.nonsymmetric;
    o.general_E = c.general_E;
    return gen_random_stable(c.n, c.m, c.p, c.seed, o);
  }
  require(gen.empty(), ErrorKind::InvalidArgument,
          "unknown generator '" + gen + "' (diffusion|random)");
  throw Error(ErrorKind::InvalidArgument, "no system given: use --A/--B[/--E/--C] or --gen");
}

ShiftSet initial_irka_shifts(const RunConfig &c, Index m)
{
  require(c.q >= 1 && c.q % m == 0, ErrorKind::InvalidArgument,
          "--q must be a positive multiple of the input count");
  const ShiftSet init = ShiftSet::parse(c.init);
  const auto k = static_cast<std::size_t>(c.q / m);
  if (init.size() == 1)
  {
    return ShiftSet(std::vector<Complex>(k, init[0]));
  }
  require(init.size() == k, ErrorKind::InvalidArgument,
          "--init needs one shift or q/m shifts, got " + std::to_string(init.size()));
  return init;
}

IrkaOptions irka_options(const RunConfig &c)
{
  IrkaOptions o;
  o.max_iter = c.irka_max_iter;
  o.shift_tol = c.irka_tol;
  o.krylov.drop_tol = c.krylov_drop;
  return o;
}

ShiftSet resolve_shifts(const RunConfig &c, const SparseSystem &sys, json &info)
{
  const int sources = static_cast<int>(!c.shifts.empty()) +
                      static_cast<int>(!c.shift_file.empty()) +
                      static_cast<int>(c.irka_shifts);
  require(sources == 1, ErrorKind::InvalidArgument,
          "give exactly one of --shifts, --shift-file, --irka");
  ShiftSet shifts;
  if (!c.shifts.empty())
  {
    shifts = ShiftSet::parse(c.shifts);
    info["source"] = "list";
  }
  else if (!c.shift_file.empty())
  {
    std::string text = read_text(c.shift_file);
    for (char &ch : text)
    {
      if (ch == '\n' || ch == '\r' || ch == ' ' || ch == '\t')
      {
        ch = ',';
      }
    }
    std::string joined;
    for (std::size_t i = 0; i < text.size(); i++)
    {
      if (text[i] == ',' && (joined.empty() || joined.back() == ','))
      {
        continue;
      }
      joined += text[i];
    }
    while (!joined.empty() && joined.back() == ',')
    {
      joined.pop_back();
    }
    shifts = ShiftSet::parse(joined);
    info["source"] = "file";
    info["file"] = c.shift_file;
  }
  else
  {
    const IrkaState st = irka_one_sided(sys, initial_irka_shifts(c, sys.inputs()), c.q,
                                        irka_options(c));
    shifts = st.current_shifts;
    info["source"] = "irka";
    info["irka_iterations"] = st.iteration;
    info["irka_status"] = st.status == IrkaStatus::Converged ? "converged" : "max_iterations";
  }
  require(!shifts.empty(), ErrorKind::InvalidArgument, "empty shift set");
  require(shifts.conjugation_closed(), ErrorKind::NotConjugationClosed,
          "shift set " + shifts.to_string() + " is not closed under conjugation");
  info["shifts"] = shifts.to_string();
  return shifts;
}

void write_meta(const RunConfig &c, const GeneratedProblem &problem, json results)
{
  json meta;
  meta["command"] = c.command;
  meta["version"] = library_version();
  meta["problem"] = problem.label;
  meta["n"] = problem.sys.order();
  meta["m"] = problem.sys.inputs();
  meta["p"] = problem.sys.outputs();
  meta["config"] = json::parse(c.to_json());
  meta["results"] = std::move(results);
  write_text_file(out_path(c, "meta.json"), meta.dump(2) + "\n");
}

AdiOptions adi_options(const RunConfig &c)
{
  AdiOptions o;
  o.max_steps = c.max_steps;
  o.residual_tol = c.tol;
  o.cyclic = c.cyclic;
  o.record_time = c.timing;
  return o;
}

double relative_residual(const ConvergenceHistory &h)
{
  if (h.records.empty() || h.rhs_norm == 0.0)
  {
    return 0.0;
  }
  return h.records.back().res_norm / h.rhs_norm;
}

ReducedModel rom_from_adi(const LowRankFactor &factor, const SylvesterData &data,
                          const std::optional<Matrix> &C)
{
  if (ShiftSet(factor.shift_of_block).balanced())
  {
    return pork_from_adi_real(factor, data, C);
  }
  return pork_from_adi(factor, data, C);
}

void print_line(const RunConfig &c, const std::string &text)
{
  std::cout << c.command << ": " << text << "\n";
}

}  // namespace

int cmd_solve_adi(const RunConfig &c)
{
  const GeneratedProblem problem = load_problem(c);
  json info;
  const ShiftSet shifts = resolve_shifts(c, problem.sys, info);
  const AdiResult r = run_adi(problem.sys, shifts, adi_options(c));

  mm::write_dense(out_path(c, "Z.mtx"), r.factor.Z);
  mm::write_dense(out_path(c, "S.mtx"), r.data.S);
  mm::write_dense(out_path(c, "L.mtx"), r.data.L);
  mm::write_dense(out_path(c, "B_perp.mtx"), r.residual.B_perp);
  write_text_file(out_path(c, "history.csv"), r.history.to_csv());

  json res;
  res["shift_set"] = info;
  res["steps"] = r.factor.blocks();
  res["rank"] = r.factor.rank();
  res["converged"] = r.history.converged;
  res["relative_residual"] = relative_residual(r.history);
  res["sylvester_defect"] = verify_sylvester(problem.sys, r.factor, r.data);
  write_meta(c, problem, res);

  std::ostringstream msg;
  msg << r.factor.blocks() << " steps, rank " << r.factor.rank() << ", relative residual "
      << mm::format_double(relative_residual(r.history))
      << (r.history.converged ? ", converged" : ", step budget exhausted");
  print_line(c, msg.str());
  return r.history.converged ? EXIT_PASS : EXIT_BUDGET;
}

int cmd_solve_rksm(const RunConfig &c)
{
  const GeneratedProblem problem = load_problem(c);
  const SparseSystem &sys = problem.sys;
  json info;
  const ShiftSet shifts = resolve_shifts(c, sys, info);
  KrylovOptions ko;
  ko.drop_tol = c.krylov_drop;
  const KrylovBasis basis = build_krylov_basis(sys, shifts, ko);

  ProjectedLyapunov proj;
  json res;
  if (c.oblique)
  {
    AdiOptions ao;
    ao.residual_tol = 0.0;
    ao.max_steps = static_cast<Index>(shifts.size());
    const AdiResult adi = run_adi(sys, shifts, ao);
    const ReducedModel rom = pork_from_adi(adi.factor, adi.data, sys.C);
    const ObliqueProjector W = construct_W(sys, basis, rom);
    res["rank_deficient_enrichment"] = W.rank_deficient;
    res["condition_defect"] = W.condition_defect;
    proj = petrov_galerkin_lyapunov(sys, basis, W.W);
  }
  else
  {
    proj = galerkin_lyapunov(sys, basis);
  }

  mm::write_dense(out_path(c, "V.mtx"), basis.V);
  mm::write_dense(out_path(c, "P_q.mtx"), proj.P_q);

  res["shift_set"] = info;
  res["projection"] = c.oblique ? "oblique" : "galerkin";
  res["rank"] = basis.rank();
  res["dropped_columns"] = basis.dropped_cols;
  if (sys.order() <= DENSE_RESIDUAL_LIMIT)
  {
    const CMatrix F = proj.low_rank_factor(basis.V).cast<Complex>();
    const double bb = norm2(Matrix(sys.B * sys.B.transpose()));
    res["relative_residual"] = explicit_residual_norm(sys, F) / bb;
  }
  write_meta(c, problem, res);

  std::ostringstream msg;
  msg << (c.oblique ? "oblique" : "galerkin") << " projection, rank " << basis.rank();
  if (res.contains("relative_residual"))
  {
    msg << ", relative residual " << mm::format_double(res["relative_residual"].get<double>());
  }
  print_line(c, msg.str());
  return EXIT_PASS;
}

int cmd_pork(const RunConfig &c)
{
  const GeneratedProblem problem = load_problem(c);
  const SparseSystem &sys = problem.sys;
  LowRankFactor factor;
  SylvesterData data;
  json res;
  if (!c.from_dir.empty())
  {
    factor.Z = mm::read_dense_complex(c.from_dir + "/Z.mtx");
    data.S = mm::read_dense_complex(c.from_dir + "/S.mtx");
    data.L = mm::read_dense(c.from_dir + "/L.mtx");
    const Index m = sys.inputs();
    require(factor.Z.rows() == sys.order() && factor.Z.cols() == data.S.rows() &&
              data.S.rows() == data.S.cols() && data.L.rows() == m &&
              data.L.cols() == data.S.cols() && data.S.rows() % m == 0,
            ErrorKind::DimensionMismatch, "artifacts in '" + c.from_dir +
                                            "' do not match the system dimensions");
    factor.block_size = m;
    for (Index i = 0; i < data.S.rows(); i += m)
    {
      factor.shift_of_block.push_back(data.S(i, i));
    }
    res["from"] = c.from_dir;
  }
  else
  {
    json info;
    const ShiftSet shifts = resolve_shifts(c, sys, info);
    const AdiResult r = run_adi(sys, shifts, adi_options(c));
    factor = r.factor;
    data = r.data;
    res["shift_set"] = info;
  }
  const ReducedModel rom = rom_from_adi(factor, data, sys.C);
  const std::string path = c.rom_path.empty() ? out_path(c, "rom.json") : c.rom_path;
  write_text_file(path, rom_to_json(rom, {{"problem", problem.label}}) + "\n");

  res["order"] = rom.order();
  res["real"] = rom.is_real();
  res["lyapunov_residual"] = rom.lyapunov_residual();
  write_meta(c, problem, res);
  print_line(c, "order " + std::to_string(rom.order()) + (rom.is_real() ? ", real" : ", complex") +
                  " model written to " + path);
  return EXIT_PASS;
}

int cmd_verify_h2(const RunConfig &c)
{
  const GeneratedProblem problem = load_problem(c);
  const std::string path = c.rom_path.empty() ? out_path(c, "rom.json") : c.rom_path;
  const ReducedModel rom = read_rom(path);
  require(rom.is_real(), ErrorKind::InvalidArgument,
          "verify-h2 needs a real reduced model; build it from a balanced shift set");
  DenseSystem d = rom.to_real();
  if (c.perturb > 0.0)
  {
    d = perturb_input(d, c.perturb, c.seed);
  }
  H2VerifyOptions vo;
  vo.orthogonality_tol = c.orthogonality_tol;
  vo.pythagoras_tol = c.pythagoras_tol;
  const H2Report report = verify_pseudo_optimality(problem.sys, d,
                                                   static_cast<std::size_t>(c.samples), c.seed, vo);
  write_text_file(out_path(c, "h2_report.json"), report.to_json() + "\n");

  json res;
  res["rom"] = path;
  res["perturb"] = c.perturb;
  res["passed"] = report.passed();
  res["max_defect_ratio"] = report.max_defect_ratio();
  write_meta(c, problem, res);
  print_line(c, std::string(report.passed() ? "passed" : "FAILED") + ", max defect ratio " +
                  mm::format_double(report.max_defect_ratio()));
  return report.passed() ? EXIT_PASS : EXIT_VERIFY_FAILED;
}

int cmd_angle(const RunConfig &c)
{
  const GeneratedProblem problem = load_problem(c);
  const SparseSystem &sys = problem.sys;
  json info;
  const ShiftSet shifts = resolve_shifts(c, sys, info);
  const auto observer = [&](const AdiState &state, AdiStepRecord &rec) {
    if (balanced_prefix(state.shifts(), state.shifts().size()))
    {
      rec.theta = obliqueness(sys, state.factor().Z, state.residual()).theta;
    }
  };
  AdiOptions ao = adi_options(c);
  const AdiResult r = run_adi(sys, shifts, ao, observer);
  const ObliquenessReport rep = obliqueness(sys, r.factor.Z, r.residual, shifts.to_string());
  write_text_file(out_path(c, "history.csv"), r.history.to_csv());

  json angle;
  angle["shift_set_id"] = rep.shift_set_id;
  angle["q"] = rep.q;
  angle["status"] = std::string(to_string(rep.status));
  angle["theta"] = rep.theta ? json(*rep.theta) : json(nullptr);
  write_text_file(out_path(c, "angle.json"), angle.dump(2) + "\n");

  json res;
  res["shift_set"] = info;
  res["angle"] = angle;
  write_meta(c, problem, res);
  print_line(c, "theta " + (rep.theta ? mm::format_double(*rep.theta) : std::string("undefined")) +
                  " (" + std::string(to_string(rep.status)) + "), q " + std::to_string(rep.q));
  return EXIT_PASS;
}

int cmd_irka(const RunConfig &c)
{
  const GeneratedProblem problem = load_problem(c);
  const SparseSystem &sys = problem.sys;
  std::optional<Matrix> P;
  IrkaObserver observer;
  if (c.monitor)
  {
    if (sys.order() <= DENSE_GRAMIAN_LIMIT)
    {
      P = dense_gramian(sys);
    }
    observer = make_irka_monitor(P ? &*P : nullptr);
  }
  const IrkaState st =
    irka_one_sided(sys, initial_irka_shifts(c, sys.inputs()), c.q, irka_options(c), observer);
  write_text_file(out_path(c, "history.csv"), st.to_csv());
  write_text_file(out_path(c, "shifts.txt"), st.current_shifts.to_string() + "\n");

  const bool converged = st.status == IrkaStatus::Converged;
  json res;
  res["iterations"] = st.iteration;
  res["status"] = converged ? "converged" : "max_iterations";
  res["shift_movement"] = st.shift_movement;
  res["reflected_poles"] = st.reflected_total();
  res["shifts"] = st.current_shifts.to_string();
  write_meta(c, problem, res);
  print_line(c, std::to_string(st.iteration) + " iterations, shifts " +
                  st.current_shifts.to_string());
  return converged || c.irka_tol == 0.0 ? EXIT_PASS : EXIT_BUDGET;
}

int cmd_experiment(const RunConfig &c)
{
  require(c.fig == 1 || c.fig == 2, ErrorKind::InvalidArgument, "--fig must be 1 or 2");
  GeneratedProblem problem = load_problem(c, true);
  problem.known_P = dense_gramian(problem.sys);

  Fig1Options f1;
  f1.q = c.q;
  f1.initial_shift = initial_irka_shifts(c, problem.sys.inputs())[0];
  f1.max_iter = c.irka_max_iter;
  bool passed = false;
  std::string summary;
  if (c.fig == 1)
  {
    const Fig1Result r = experiment_fig1(problem, f1, c.out_dir);
    passed = r.passed();
    summary = "theta " + (r.final_theta ? mm::format_double(*r.final_theta) : std::string("-")) +
              ", rel_error " + mm::format_double(r.final_rel_error);
  }
  else
  {
    ShiftSet shifts;
    if (!c.shifts.empty() || !c.shift_file.empty())
    {
      json info;
      shifts = resolve_shifts(c, problem.sys, info);
    }
    else
    {
      shifts = experiment_fig1(problem, f1).irka.current_shifts;
    }
    Fig2Options f2;
    f2.total_steps = c.total_steps;
    const Fig2Result r = experiment_fig2(problem, shifts, f2, c.out_dir);
    passed = r.passed();
    summary = "final rel_error " + mm::format_double(r.rows.empty() ? 0.0 : r.rows.back().rel_error);
  }

  json meta = json::parse(read_text(out_path(c, "meta.json")));
  meta["config"] = json::parse(c.to_json());
  write_text_file(out_path(c, "meta.json"), meta.dump(2) + "\n");
  print_line(c, "fig " + std::to_string(c.fig) + ", " + summary +
                  (passed ? ", all checks passed" : ", checks FAILED"));
  return passed ? EXIT_PASS : EXIT_VERIFY_FAILED;
}

int run_command(const RunConfig &config)
{
  try
  {
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    require(!ec, ErrorKind::Io, "cannot create output directory '" + config.out_dir + "'");
    if (config.command == "solve-adi")
    {
      return cmd_solve_adi(config);
    }
    if (config.command == "solve-rksm")
    {
      return cmd_solve_rksm(config);
    }
    if (config.command == "pork")
    {
      return cmd_pork(config);
    }
    if (config.command == "verify-h2")
    {
      return cmd_verify_h2(config);
    }
    if (config.command == "angle")
    {
      return cmd_angle(config);
    }
    if (config.command == "irka")
    {
      return cmd_irka(config);
    }
    if (config.command == "experiment")
    {
      return cmd_experiment(config);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown command '" + config.command + "'");
  }
  catch (const std::exception &e)
  {
    std::cerr << "lyapkit " << config.command << ": " << e.what() << "\n";
    return EXIT_OPERATIONAL;
  }
}

}  // namespace lyapkit::cli
