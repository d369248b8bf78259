#pragma once

#include <exception>
#include <mutex>

#include "frontier/types.hpp"

namespace frontier
{

// Serial is the reference path; Parallel distributes independent work items
// over OpenMP threads and must give identical results.
enum class Execution
{
  Serial,
  Parallel
};

template <class F>
void for_each_index(Index n, Execution exec, F&& body)
{
  if (exec == Execution::Serial)
  {
    for (Index i = 0; i < n; ++i)
      body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex guard;
#pragma omp parallel for schedule(dynamic, 8)
  for (Index i = 0; i < n; ++i)
  {
    try
    {
      body(i);
    }
    catch (...)
    {
      std::lock_guard lock(guard);
      if (!failure)
        failure = std::current_exception();
    }
  }
  if (failure)
    std::rethrow_exception(failure);
}

}  // namespace frontier
