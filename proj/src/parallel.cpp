// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "lyapkit/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace lyapkit
{

std::size_t thread_budget()
{
  if (const char *env = std::getenv("LYAPKIT_THREADS"))
  {
    try
    {
      const long v = std::stol(env);
      if (v > 0)
      {
        return static_cast<std::size_t>(v);
      }
    }
    catch (const std::exception &)
    {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body)
{
  const std::size_t workers = std::min(thread_budget(), count);
  std::vector<std::exception_ptr> errors(count);
  if (workers <= 1)
  {
    for (std::size_t i = 0; i < count; i++)
    {
      try
      {
        body(i);
      }
      catch (...)
      {
        errors[i] = std::current_exception();
      }
    }
  }
  else
  {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; w++)
    {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++)
        {
          try
          {
            body(i);
          }
          catch (...)
          {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto &t : pool)
    {
      t.join();
    }
  }
  for (const auto &e : errors)
  {
    if (e)
    {
      std::rethrow_exception(e);
    }
  }
}

}  // namespace lyapkit
