// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LYAPKIT_TESTS_SUPPORT_HPP
#define LYAPKIT_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lyapkit/bench.hpp"
#include "lyapkit/shift_set.hpp"

namespace support
{

using namespace lyapkit;

// Conjugation-closed, balanced set of k shifts with conjugates adjacent. Real and complex
// entries are mixed; with repeats, some earlier entries (or pairs) are reused.
inline ShiftSet random_shifts(std::mt19937_64 &rng, std::size_t k, bool allow_complex = true,
                              bool repeats = false)
{
  std::uniform_real_distribution<double> logre(std::log(0.3), std::log(30.0));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Complex> s;
  while (s.size() < k)
  {
    if (repeats && !s.empty() && u(rng) < 0.3)
    {
      const std::size_t j = static_cast<std::size_t>(u(rng) * static_cast<double>(s.size()));
      const Complex z = s[j];
      if (z.imag() == 0.0)
      {
        s.push_back(z);
        continue;
      }
      if (s.size() + 2 <= k)
      {
        const Complex up(z.real(), std::abs(z.imag()));
        s.push_back(up);
        s.push_back(std::conj(up));
        continue;
      }
    }
    const double re = std::exp(logre(rng));
    if (allow_complex && s.size() + 2 <= k && u(rng) < 0.5)
    {
      const Complex z(re, re * (0.2 + 1.8 * u(rng)));
      s.push_back(z);
      s.push_back(std::conj(z));
    }
    else
    {
      s.push_back(re);
    }
  }
  return ShiftSet(s);
}

struct SuiteCase
{
  GeneratedProblem problem;
  ShiftSet shifts;
};

// n in {20, 50, 100, 200}, m in {1, 2, 3}, mixed shift sets with k <= 10 and repeats. k is
// capped so that [E V, B] with k m + m columns still fits in n rows.
inline std::vector<SuiteCase> adi_suite(std::size_t count = 25, std::uint64_t seed = 2024)
{
  const Index ns[] = {20, 50, 100, 200};
  std::vector<SuiteCase> out;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; i++)
  {
    const Index n = ns[i % 4];
    const Index m = static_cast<Index>(i % 3) + 1;
    RandomOptions o;
    o.nonsymmetric = i % 5 != 0;
    o.general_E = i % 2 == 1;
    GeneratedProblem gp = gen_random_stable(n, m, 2, seed + i, o);
    const std::size_t k = std::min<std::size_t>(3 + i % 8, static_cast<std::size_t>(n / m - 1));
    ShiftSet s = random_shifts(rng, k, i % 6 != 0, i % 3 == 0);
    out.push_back({std::move(gp), std::move(s)});
  }
  return out;
}

}  // namespace support

#endif  // LYAPKIT_TESTS_SUPPORT_HPP
