// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "lyapkit/bench.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "lyapkit/adi.hpp"
#include "lyapkit/angle.hpp"
#include "lyapkit/error.hpp"
#include "lyapkit/h2.hpp"
#include "lyapkit/mmio.hpp"

#ifndef LYAPKIT_VERSION
#define LYAPKIT_VERSION "unknown"
#endif

namespace lyapkit
{

namespace
{

void check_stable(const SparseSystem &sys, const std::string &label)
{
  if (sys.order() > STABILITY_CHECK_LIMIT)
  {
    return;
  }
  const CVector ev = pencil_eigenvalues(Matrix(sys.A), Matrix(sys.E));
  for (Index i = 0; i < ev.size(); i++)
  {
    require(ev(i).real() < 0.0, ErrorKind::UnstableSystem,
            label + ": generated pencil is not stable");
  }
}

SparseMatrix tridiag(Index n, double lower, double diag, double upper)
{
  std::vector<Eigen::Triplet<double>> t;
  for (Index i = 0; i < n; i++)
  {
    t.emplace_back(i, i, diag);
    if (i > 0)
    {
      t.emplace_back(i, i - 1, lower);
    }
    if (i + 1 < n)
    {
      t.emplace_back(i, i + 1, upper);
    }
  }
  SparseMatrix M(n, n);
  M.setFromTriplets(t.begin(), t.end());
  M.makeCompressed();
  return M;
}

nlohmann::ordered_json complex_json(Complex z) { return {z.real(), z.imag()}; }

}  // namespace

std::string library_version() { return LYAPKIT_VERSION; }

void write_text_file(const std::string &path, const std::string &text)
{
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path())
  {
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot open '" + path + "' for writing");
  out << text;
  require(static_cast<bool>(out), ErrorKind::Io, "write to '" + path + "' failed");
}

Matrix dense_gramian(const SparseSystem &sys)
{
  require(sys.order() <= DENSE_GRAMIAN_LIMIT, ErrorKind::DimensionTooLarge,
          "dense Gramian needs n <= " + std::to_string(DENSE_GRAMIAN_LIMIT));
  return solve_dense_lyapunov(Matrix(sys.A), Matrix(sys.E), sys.B * sys.B.transpose());
}

std::string_view to_string(InputProfile profile)
{
  return profile == InputProfile::Source ? "source" : "boundary";
}

InputProfile parse_input_profile(std::string_view text)
{
  if (text == "source")
  {
    return InputProfile::Source;
  }
  if (text == "boundary")
  {
    return InputProfile::Boundary;
  }
  throw Error(ErrorKind::InvalidArgument,
              "unknown input profile '" + std::string(text) + "' (source|boundary)");
}

GeneratedProblem gen_diffusion_1d(Index n, Index m, const DiffusionOptions &opts)
{
  require(n >= 3, ErrorKind::InvalidArgument, "diffusion: n must be at least 3");
  require(m >= 1 && m <= n, ErrorKind::InvalidArgument, "diffusion: need 1 <= m <= n");
  require(opts.source_width > 0.0, ErrorKind::InvalidArgument,
          "diffusion: source width must be positive");
  const double h2 = static_cast<double>((n + 1) * (n + 1));
  SparseMatrix A = tridiag(n, h2, -2.0 * h2, h2);
  SparseMatrix E =
    opts.mass_matrix ? tridiag(n, 1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0) : sparse_identity(n);
  Matrix B = Matrix::Zero(n, m);
  for (Index j = 0; j < m; j++)
  {
    if (opts.input == InputProfile::Boundary)
    {
      B(j, j) = 1.0;
      continue;
    }
    const double centre = static_cast<double>(j + 1) / static_cast<double>(m + 1);
    for (Index i = 0; i < n; i++)
    {
      const double x = static_cast<double>(i + 1) / static_cast<double>(n + 1);
      const double r = (x - centre) / opts.source_width;
      B(i, j) = std::exp(-r * r);
    }
    B.col(j).normalize();
  }
  Matrix C = B.transpose();
  std::ostringstream label;
  label << "diffusion_1d(n=" << n << ",m=" << m << ",input=" << to_string(opts.input);
  if (opts.input == InputProfile::Source)
  {
    label << ",width=" << mm::format_double(opts.source_width);
  }
  label << (opts.mass_matrix ? ",mass" : "") << ")";
  GeneratedProblem gp{make_system(std::move(E), std::move(A), std::move(B), std::move(C)),
                      label.str(),
                      0,
                      std::nullopt};
  check_stable(gp.sys, gp.label);
  if (opts.compute_gramian)
  {
    gp.known_P = dense_gramian(gp.sys);
  }
  return gp;
}

GeneratedProblem gen_random_stable(Index n, Index m, Index p, std::uint64_t seed,
                                   const RandomOptions &opts)
{
  require(n >= 1 && m >= 1 && p >= 1, ErrorKind::InvalidArgument,
          "random system: n, m, p must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<Index> col(0, std::max<Index>(n - 1, 0));

  // Off-diagonal pattern, about three entries per row.
  std::vector<Eigen::Triplet<double>> off;
  if (n > 1)
  {
    for (Index i = 0; i < n; i++)
    {
      for (int k = 0; k < 3; k++)
      {
        const Index j = col(rng);
        if (j == i)
        {
          continue;
        }
        const double v = normal(rng);
        off.emplace_back(i, j, v);
        if (!opts.nonsymmetric)
        {
          off.emplace_back(j, i, v);
        }
      }
    }
  }
  SparseMatrix O(n, n);
  O.setFromTriplets(off.begin(), off.end());
  Vector row_abs = Vector::Zero(n);
  Vector col_abs = Vector::Zero(n);
  for (Index j = 0; j < O.outerSize(); j++)
  {
    for (SparseMatrix::InnerIterator it(O, j); it; ++it)
    {
      row_abs(it.row()) += std::abs(it.value());
      col_abs(it.col()) += std::abs(it.value());
    }
  }
  std::vector<Eigen::Triplet<double>> t = off;
  for (Index i = 0; i < n; i++)
  {
    // Gershgorin on (A + A^T)/2 keeps the symmetric part negative definite.
    const double spread = std::exp(-1.0 + 4.0 * unif(rng));
    t.emplace_back(i, i, -(0.5 * (row_abs(i) + col_abs(i)) + spread));
  }
  SparseMatrix A(n, n);
  A.setFromTriplets(t.begin(), t.end());

  SparseMatrix E = sparse_identity(n);
  if (opts.general_E)
  {
    std::vector<Eigen::Triplet<double>> te;
    Vector abs_sum = Vector::Zero(n);
    if (n > 1)
    {
      for (Index i = 0; i < n; i++)
      {
        const Index j = col(rng);
        if (j == i)
        {
          continue;
        }
        const double v = 0.3 * (2.0 * unif(rng) - 1.0);
        te.emplace_back(i, j, v);
        te.emplace_back(j, i, v);
        abs_sum(i) += std::abs(v);
        abs_sum(j) += std::abs(v);
      }
    }
    for (Index i = 0; i < n; i++)
    {
      te.emplace_back(i, i, 1.0 + abs_sum(i) + unif(rng));
    }
    E.setZero();
    E.setFromTriplets(te.begin(), te.end());
  }

  Matrix B(n, m);
  for (Index j = 0; j < m; j++)
  {
    for (Index i = 0; i < n; i++)
    {
      B(i, j) = normal(rng);
    }
  }
  Matrix C(p, n);
  for (Index j = 0; j < n; j++)
  {
    for (Index i = 0; i < p; i++)
    {
      C(i, j) = normal(rng);
    }
  }
  std::ostringstream label;
  label << "random_stable(n=" << n << ",m=" << m << ",p=" << p << ",seed=" << seed
        << (opts.nonsymmetric ? ",nonsym" : ",sym") << (opts.general_E ? ",E" : "") << ")";
  GeneratedProblem gp{make_system(std::move(E), std::move(A), std::move(B), std::move(C)),
                      label.str(), seed, std::nullopt};
  check_stable(gp.sys, gp.label);
  if (opts.compute_gramian)
  {
    gp.known_P = dense_gramian(gp.sys);
  }
  return gp;
}

namespace
{

template <class Mat>
double hermitian_norm2_impl(const Mat &D, Index max_iter, double tol)
{
  const Index n = D.rows();
  require(D.cols() == n, ErrorKind::DimensionMismatch, "hermitian_norm2: matrix not square");
  if (n == 0)
  {
    return 0.0;
  }
  using Vec = Eigen::Matrix<typename Mat::Scalar, Eigen::Dynamic, 1>;
  Vec v(n);
  for (Index i = 0; i < n; i++)
  {
    v(i) = 1.0 + 0.5 * std::sin(static_cast<double>(i + 1));
  }
  v /= v.norm();
  double est = 0.0;
  for (Index it = 0; it < max_iter; it++)
  {
    Vec w = D * v;
    const double nw = w.norm();
    if (nw == 0.0)
    {
      return 0.0;
    }
    const bool done = it > 0 && std::abs(nw - est) <= tol * nw;
    est = nw;
    v = w / nw;
    if (done)
    {
      break;
    }
  }
  return est;
}

}  // namespace

double hermitian_norm2(const CMatrix &D, Index max_iter, double tol)
{
  return hermitian_norm2_impl(D, max_iter, tol);
}

double hermitian_norm2(const Matrix &D, Index max_iter, double tol)
{
  return hermitian_norm2_impl(D, max_iter, tol);
}

double relative_gramian_error(const Matrix &P, const CMatrix &Z)
{
  require(Z.rows() == P.rows(), ErrorKind::DimensionMismatch,
          "relative_gramian_error: Z has wrong row count");
  const double pn = hermitian_norm2(P);
  CMatrix D = P.cast<Complex>();
  D.noalias() -= Z * Z.adjoint();
  if (relative_imag(D) == 0.0)
  {
    return hermitian_norm2(Matrix(D.real())) / pn;
  }
  return hermitian_norm2(D) / pn;
}

Fig1Result experiment_fig1(const GeneratedProblem &problem, const Fig1Options &opts,
                           const std::string &out_dir)
{
  const auto &sys = problem.sys;
  const Matrix P = problem.known_P ? *problem.known_P : dense_gramian(sys);
  const std::vector<Complex> init(static_cast<std::size_t>(opts.q / sys.inputs()),
                                  opts.initial_shift);
  IrkaOptions io;
  io.max_iter = opts.max_iter;
  io.shift_tol = opts.shift_tol;
  Fig1Result res;
  res.irka = irka_one_sided(sys, ShiftSet(init), opts.q, io, make_irka_monitor(&P));

  std::ostringstream csv;
  csv << "iteration,theta,rel_error\n";
  for (const auto &r : res.irka.history)
  {
    csv << r.iteration << ',' << (r.theta ? mm::format_double(*r.theta) : std::string()) << ','
        << mm::format_double(r.rel_error.value_or(0.0)) << "\n";
  }
  res.csv = csv.str();

  const auto &hist = res.irka.history;
  const auto &last = hist.back();
  const auto &mid = hist[static_cast<std::size_t>((hist.size() + 1) / 2 - 1)];
  res.final_theta = last.theta;
  res.final_rel_error = last.rel_error.value_or(0.0);
  res.midpoint_rel_error = mid.rel_error.value_or(0.0);
  res.theta_ok = !last.theta || *last.theta <= opts.theta_tol;
  res.plateau_ok = std::abs(res.final_rel_error - res.midpoint_rel_error) <=
                   opts.plateau_tol * res.midpoint_rel_error;

  if (!out_dir.empty())
  {
    nlohmann::ordered_json meta;
    meta["experiment"] = "fig1";
    meta["problem"] = problem.label;
    meta["seed"] = problem.seed;
    meta["n"] = sys.order();
    meta["m"] = sys.inputs();
    meta["q"] = opts.q;
    meta["initial_shift"] = complex_json(opts.initial_shift);
    meta["max_iter"] = opts.max_iter;
    meta["shift_tol"] = opts.shift_tol;
    meta["iterations"] = res.irka.iteration;
    meta["status"] =
      res.irka.status == IrkaStatus::Converged ? "converged" : "max_iterations";
    meta["reflected_poles"] = res.irka.reflected_total();
    auto &fs = meta["final_shifts"] = nlohmann::ordered_json::array();
    for (const auto &s : res.irka.current_shifts)
    {
      fs.push_back(complex_json(s));
    }
    meta["final_shifts_text"] = res.irka.current_shifts.to_string();
    meta["theta_tol"] = opts.theta_tol;
    meta["plateau_tol"] = opts.plateau_tol;
    meta["theta_ok"] = res.theta_ok;
    meta["plateau_ok"] = res.plateau_ok;
    meta["version"] = library_version();
    write_text_file(out_dir + "/history.csv", res.csv);
    write_text_file(out_dir + "/meta.json", meta.dump(2) + "\n");
  }
  return res;
}

Fig2Result experiment_fig2(const GeneratedProblem &problem, const ShiftSet &shifts,
                           const Fig2Options &opts, const std::string &out_dir)
{
  const auto &sys = problem.sys;
  const Matrix P = problem.known_P ? *problem.known_P : dense_gramian(sys);
  const double pn = hermitian_norm2(P);
  const Index m = sys.inputs();
  Fig2Result res;
  CMatrix D = P.cast<Complex>();

  AdiOptions adi;
  adi.cyclic = true;
  adi.max_steps = opts.total_steps;
  adi.residual_tol = 0.0;
  const auto observer = [&](const AdiState &state, AdiStepRecord &rec) {
    const LowRankFactor f = state.factor();
    const CMatrix Zi = f.Z.rightCols(m);
    D.noalias() -= Zi * Zi.adjoint();
    Fig2Row row;
    row.step = rec.step;
    row.rank = rec.q;
    row.rel_error = (relative_imag(D) == 0.0 ? hermitian_norm2(Matrix(D.real()))
                                             : hermitian_norm2(D)) /
                    pn;
    if (balanced_prefix(state.shifts(), state.shifts().size()))
    {
      row.theta = obliqueness(sys, f.Z, state.residual()).theta;
      rec.theta = row.theta;
    }
    res.rows.push_back(row);
  };
  run_adi(sys, shifts, adi, observer);

  std::ostringstream csv;
  csv << "step,rank,rel_error,theta\n";
  for (const auto &r : res.rows)
  {
    csv << r.step << ',' << r.rank << ',' << mm::format_double(r.rel_error) << ','
        << (r.theta ? mm::format_double(*r.theta) : std::string()) << "\n";
  }
  res.csv = csv.str();

  const Index k = static_cast<Index>(shifts.size());
  res.error_ok = !res.rows.empty() && res.rows.back().rel_error <= opts.error_tol;
  res.decay_ok = !res.rows.empty() && res.rows.back().rel_error <= res.rows.front().rel_error / 1.0e3;
  bool any_theta = false;
  res.theta_ok = true;
  for (const auto &r : res.rows)
  {
    if (r.step >= opts.sweeps_before_theta * k && r.theta)
    {
      any_theta = true;
      res.theta_ok = res.theta_ok && *r.theta >= opts.theta_min;
    }
  }
  res.theta_ok = res.theta_ok && any_theta;

  if (!out_dir.empty())
  {
    nlohmann::ordered_json meta;
    meta["experiment"] = "fig2";
    meta["problem"] = problem.label;
    meta["seed"] = problem.seed;
    meta["n"] = sys.order();
    meta["m"] = m;
    meta["shifts"] = shifts.to_string();
    meta["total_steps"] = opts.total_steps;
    meta["error_tol"] = opts.error_tol;
    meta["theta_min"] = opts.theta_min;
    meta["sweeps_before_theta"] = opts.sweeps_before_theta;
    meta["final_rel_error"] = res.rows.empty() ? 0.0 : res.rows.back().rel_error;
    meta["error_ok"] = res.error_ok;
    meta["theta_ok"] = res.theta_ok;
    meta["decay_ok"] = res.decay_ok;
    meta["version"] = library_version();
    write_text_file(out_dir + "/history.csv", res.csv);
    write_text_file(out_dir + "/meta.json", meta.dump(2) + "\n");
  }
  return res;
}

}  // namespace lyapkit
