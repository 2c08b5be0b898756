// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LYAPKIT_H2_HPP
#define LYAPKIT_H2_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lyapkit/system.hpp"

namespace lyapkit
{

// Dense Gramians are formed for full systems up to this order.
constexpr Index DENSE_GRAMIAN_LIMIT = 2000;

// Throws UnstableSystem unless every eigenvalue of E^{-1} A has negative real part.
void require_stable(const DenseSystem &sys);

// sqrt(trace(C P C^T)) with the controllability Gramian P.
double h2_norm(const DenseSystem &sys);
double h2_norm(const SparseSystem &sys);
// Same, from a low-rank Gramian factor P = Z Z^H: ||C Z||_F.
double h2_norm(const SparseSystem &sys, const CMatrix &Z);

// trace(C X C~^T) where A X E~^T + E X A~^T + B B~^T = 0.
double h2_inner_product(const SparseSystem &G, const DenseSystem &H);
double h2_inner_product(const DenseSystem &G, const DenseSystem &H);

// sqrt(max(0, ||G||^2 - 2 <G, H> + ||H||^2)).
double h2_error_norm(const SparseSystem &G, const DenseSystem &H);
double h2_error_norm(const SparseSystem &G, const DenseSystem &H, double norm_G);

// Member of the class sharing (E_q, A_q) with the reduced model; B~ and C~ are sampled.
struct PerturbationSample
{
  Matrix B;
  Matrix C;
};

PerturbationSample sample_perturbation(const DenseSystem &rom, std::mt19937_64 &rng);
DenseSystem with_io(const DenseSystem &rom, const PerturbationSample &sample);

// Copy of rom with B_q + rel ||B_q|| N, N standard normal scaled to unit Frobenius norm.
DenseSystem perturb_input(const DenseSystem &rom, double rel, std::uint64_t seed);

struct OrthogonalitySample
{
  std::size_t id = 0;
  double inner_product = 0.0;  // <G - G_q, G~>
  double bound = 0.0;          // tol ||G|| ||G~||
  double pythagoras_rel = 0.0;
};

struct H2VerifyOptions
{
  double orthogonality_tol = 1.0e-8;
  double pythagoras_tol = 1.0e-6;
};

struct H2Report
{
  double norm_G = 0.0;
  double norm_rom = 0.0;
  double norm_error = 0.0;
  std::uint64_t seed = 0;
  H2VerifyOptions tolerances;
  std::vector<OrthogonalitySample> orthogonality_samples;

  bool orthogonal() const;
  bool pythagoras() const;
  bool passed() const { return orthogonal() && pythagoras(); }
  // Largest |<G - G_q, G~>| / (||G|| ||G~||) over the samples.
  double max_defect_ratio() const;
  std::string to_json() const;
};

//
// Checks <G - G_q, G~> = 0 for sampled G~ over the fixed pole structure (E_q, A_q) of the
// reduced model, and the resulting Pythagoras identity. Requires sys.C.
//
H2Report verify_pseudo_optimality(const SparseSystem &sys, const DenseSystem &rom,
                                  std::size_t n_samples, std::uint64_t seed,
                                  const H2VerifyOptions &opts = {});

}  // namespace lyapkit

#endif  // LYAPKIT_H2_HPP
