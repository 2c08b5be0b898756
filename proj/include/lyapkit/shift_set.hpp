// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LYAPKIT_SHIFT_SET_HPP
#define LYAPKIT_SHIFT_SET_HPP

#include <string>
#include <string_view>
#include <vector>

#include "lyapkit/types.hpp"

namespace lyapkit
{

// Two shifts are treated as conjugates when they agree to this relative tolerance.
constexpr double CONJUGATE_TOL = 1.0e-12;

bool is_conjugate(Complex a, Complex b, double tol = CONJUGATE_TOL);

//
// Ordered sequence of shifts in the open right half-plane. The order is the order in which
// the ADI iteration consumes them; repeated values are allowed.
//
class ShiftSet
{
public:
  ShiftSet() = default;
  explicit ShiftSet(std::vector<Complex> shifts);
  ShiftSet(std::initializer_list<Complex> shifts) : ShiftSet(std::vector<Complex>(shifts)) {}

  const std::vector<Complex> &values() const { return shifts_; }
  std::size_t size() const { return shifts_.size(); }
  bool empty() const { return shifts_.empty(); }
  Complex operator[](std::size_t i) const { return shifts_[i]; }
  auto begin() const { return shifts_.begin(); }
  auto end() const { return shifts_.end(); }

  // Every shift has its conjugate somewhere in the set.
  bool conjugation_closed() const;
  // Every complex shift occurs exactly as often as its conjugate.
  bool balanced() const;
  bool all_real() const;

  // "1,2+1i,2-1i" style lists; 'j' is accepted in place of 'i'.
  static ShiftSet parse(std::string_view text);
  std::string to_string() const;

private:
  std::vector<Complex> shifts_;
};

// True when the first `length` entries of seq form a balanced multiset.
bool balanced_prefix(const std::vector<Complex> &seq, std::size_t length);

// Repeats the shifts in order and truncates after total_steps entries.
std::vector<Complex> cyclic_schedule(const ShiftSet &shifts, std::size_t total_steps);

Complex parse_complex(std::string_view text);
std::string format_complex(Complex z);

}  // namespace lyapkit

#endif  // LYAPKIT_SHIFT_SET_HPP
