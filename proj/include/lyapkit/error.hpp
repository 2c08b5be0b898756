// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LYAPKIT_ERROR_HPP
#define LYAPKIT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace lyapkit
{

enum class ErrorKind
{
  InvalidArgument,
  DimensionMismatch,
  SingularShiftedMatrix,
  UnstablePencil,
  SpectraOverlap,
  ConvergenceFailure,
  ZeroSubspace,
  DimensionTooLarge,
  NotConjugationClosed,
  UnstableProjectedPencil,
  SingularReducedE,
  NotObservable,
  RankDeficientEnrichment,
  UnstableSystem,
  Io,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this type; callers branch on kind().
class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string &what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
  {
  }

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string &what)
{
  if (!condition)
  {
    throw Error(kind, what);
  }
}

}  // namespace lyapkit

#endif  // LYAPKIT_ERROR_HPP
