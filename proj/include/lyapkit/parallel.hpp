// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LYAPKIT_PARALLEL_HPP
#define LYAPKIT_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace lyapkit
{

// Worker count: LYAPKIT_THREADS if set to a positive integer, else hardware concurrency.
std::size_t thread_budget();

// Runs body(i) for i in [0, count). Results must be written to disjoint slots so that the
// outcome does not depend on scheduling. The first exception (lowest index) is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body);

}  // namespace lyapkit

#endif  // LYAPKIT_PARALLEL_HPP
