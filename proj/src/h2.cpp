// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "lyapkit/h2.hpp"

#include <cmath>

#include <json.hpp>

#include "lyapkit/error.hpp"
#include "lyapkit/linalg.hpp"
#include "lyapkit/parallel.hpp"

namespace lyapkit
{

namespace
{

Matrix require_output(const SparseSystem &sys)
{
  require(sys.C.has_value(), ErrorKind::InvalidArgument, "H2 quantities need an output map C");
  return *sys.C;
}

void check_compatible(Index m1, Index p1, Index m2, Index p2)
{
  require(m1 == m2 && p1 == p2, ErrorKind::DimensionMismatch,
          "H2 inner product: systems differ in input or output dimension");
}

double gramian_norm(const Matrix &A, const Matrix &E, const Matrix &B, const Matrix &C)
{
  Matrix P;
  try
  {
    P = solve_dense_lyapunov(A, E, B * B.transpose());
  }
  catch (const Error &e)
  {
    if (e.kind() == ErrorKind::UnstablePencil)
    {
      throw Error(ErrorKind::UnstableSystem, e.what());
    }
    throw;
  }
  return std::sqrt(std::max(0.0, (C * P * C.transpose()).trace()));
}

double cross_term(const SparseSystem &G, const DenseSystem &H)
{
  const Matrix C = require_output(G);
  check_compatible(G.inputs(), C.rows(), H.inputs(), H.outputs());
  Matrix X;
  try
  {
    X = solve_sylvester(G.A, G.E, H.A, H.E, Matrix(G.B * H.B.transpose()));
  }
  catch (const Error &e)
  {
    if (e.kind() == ErrorKind::UnstablePencil)
    {
      throw Error(ErrorKind::UnstableSystem, e.what());
    }
    throw;
  }
  return (C * X * H.C.transpose()).trace();
}

}  // namespace

void require_stable(const DenseSystem &sys)
{
  sys.validate();
  const CVector ev = pencil_eigenvalues(sys.A, sys.E);
  for (Index i = 0; i < ev.size(); i++)
  {
    require(ev(i).real() < 0.0, ErrorKind::UnstableSystem,
            "system has a pole with nonnegative real part");
  }
}

double h2_norm(const DenseSystem &sys)
{
  sys.validate();
  return gramian_norm(sys.A, sys.E, sys.B, sys.C);
}

double h2_norm(const SparseSystem &sys)
{
  const Matrix C = require_output(sys);
  require(sys.order() <= DENSE_GRAMIAN_LIMIT, ErrorKind::DimensionTooLarge,
          "dense Gramian needs n <= " + std::to_string(DENSE_GRAMIAN_LIMIT) +
            "; supply a low-rank factor instead");
  return gramian_norm(Matrix(sys.A), Matrix(sys.E), sys.B, C);
}

double h2_norm(const SparseSystem &sys, const CMatrix &Z)
{
  const Matrix C = require_output(sys);
  require(Z.rows() == sys.order(), ErrorKind::DimensionMismatch, "h2_norm: Z has wrong rows");
  return (C.cast<Complex>() * Z).norm();
}

double h2_inner_product(const SparseSystem &G, const DenseSystem &H)
{
  H.validate();
  require_stable(H);
  return cross_term(G, H);
}

double h2_inner_product(const DenseSystem &G, const DenseSystem &H)
{
  return h2_inner_product(to_sparse(G), H);
}

double h2_error_norm(const SparseSystem &G, const DenseSystem &H, double norm_G)
{
  const double cross = h2_inner_product(G, H);
  const double nh = h2_norm(H);
  return std::sqrt(std::max(0.0, norm_G * norm_G - 2.0 * cross + nh * nh));
}

double h2_error_norm(const SparseSystem &G, const DenseSystem &H)
{
  return h2_error_norm(G, H, h2_norm(G));
}

PerturbationSample sample_perturbation(const DenseSystem &rom, std::mt19937_64 &rng)
{
  std::normal_distribution<double> normal(0.0, 1.0);
  PerturbationSample s{Matrix(rom.order(), rom.inputs()), Matrix(rom.outputs(), rom.order())};
  for (Index j = 0; j < s.B.cols(); j++)
  {
    for (Index i = 0; i < s.B.rows(); i++)
    {
      s.B(i, j) = normal(rng);
    }
  }
  for (Index j = 0; j < s.C.cols(); j++)
  {
    for (Index i = 0; i < s.C.rows(); i++)
    {
      s.C(i, j) = normal(rng);
    }
  }
  return s;
}

DenseSystem with_io(const DenseSystem &rom, const PerturbationSample &sample)
{
  return DenseSystem{rom.E, rom.A, sample.B, sample.C};
}

DenseSystem perturb_input(const DenseSystem &rom, double rel, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix N(rom.B.rows(), rom.B.cols());
  for (Index j = 0; j < N.cols(); j++)
  {
    for (Index i = 0; i < N.rows(); i++)
    {
      N(i, j) = normal(rng);
    }
  }
  DenseSystem out = rom;
  out.B += rel * rom.B.norm() / N.norm() * N;
  return out;
}

bool H2Report::orthogonal() const
{
  return std::all_of(orthogonality_samples.begin(), orthogonality_samples.end(),
                     [](const auto &s) { return std::abs(s.inner_product) <= s.bound; });
}

bool H2Report::pythagoras() const
{
  return std::all_of(orthogonality_samples.begin(), orthogonality_samples.end(),
                     [&](const auto &s) { return s.pythagoras_rel <= tolerances.pythagoras_tol; });
}

double H2Report::max_defect_ratio() const
{
  double worst = 0.0;
  for (const auto &s : orthogonality_samples)
  {
    worst = std::max(worst, std::abs(s.inner_product) / s.bound * tolerances.orthogonality_tol);
  }
  return worst;
}

std::string H2Report::to_json() const
{
  nlohmann::ordered_json j;
  j["norm_G"] = norm_G;
  j["norm_rom"] = norm_rom;
  j["norm_error"] = norm_error;
  j["seed"] = seed;
  j["orthogonality_tol"] = tolerances.orthogonality_tol;
  j["pythagoras_tol"] = tolerances.pythagoras_tol;
  j["orthogonal"] = orthogonal();
  j["pythagoras"] = pythagoras();
  j["passed"] = passed();
  auto &arr = j["orthogonality_samples"] = nlohmann::ordered_json::array();
  for (const auto &s : orthogonality_samples)
  {
    arr.push_back({{"id", s.id},
                   {"inner_product", s.inner_product},
                   {"bound", s.bound},
                   {"pythagoras_rel", s.pythagoras_rel}});
  }
  return j.dump(2) + "\n";
}

H2Report verify_pseudo_optimality(const SparseSystem &sys, const DenseSystem &rom,
                                  std::size_t n_samples, std::uint64_t seed,
                                  const H2VerifyOptions &opts)
{
  require_output(sys);
  require_stable(rom);
  H2Report report;
  report.seed = seed;
  report.tolerances = opts;
  report.norm_G = h2_norm(sys);
  report.norm_rom = h2_norm(rom);
  const double cross_q = cross_term(sys, rom);
  const double err2 =
    std::max(0.0, report.norm_G * report.norm_G - 2.0 * cross_q + report.norm_rom * report.norm_rom);
  report.norm_error = std::sqrt(err2);

  // Samples are drawn sequentially so that the stream does not depend on threading.
  std::mt19937_64 rng(seed);
  std::vector<PerturbationSample> samples;
  for (std::size_t i = 0; i < n_samples; i++)
  {
    samples.push_back(sample_perturbation(rom, rng));
  }
  report.orthogonality_samples.resize(n_samples);
  parallel_for(n_samples, [&](std::size_t i) {
    const DenseSystem Gt = with_io(rom, samples[i]);
    const double g_gt = cross_term(sys, Gt);
    const double q_gt = h2_inner_product(to_sparse(rom), Gt);
    const double nt = h2_norm(Gt);
    auto &s = report.orthogonality_samples[i];
    s.id = i;
    s.inner_product = g_gt - q_gt;
    s.bound = opts.orthogonality_tol * report.norm_G * nt;
    // ||G - G~||^2 against ||G - G_q||^2 + ||G_q - G~||^2.
    const double lhs = report.norm_G * report.norm_G - 2.0 * g_gt + nt * nt;
    const double rhs = err2 + report.norm_rom * report.norm_rom - 2.0 * q_gt + nt * nt;
    s.pythagoras_rel = std::abs(lhs - rhs) / std::max(std::abs(lhs), 1.0e-300);
  });
  return report;
}

}  // namespace lyapkit
