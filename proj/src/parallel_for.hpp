#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#include "hvpol/exec.hpp"

namespace hvpol::detail {

// Runs body(i) for i in [0, n). The first exception thrown by any iteration
// is rethrown after the loop. Iterations must write to disjoint outputs.
template <class Body>
void parallel_for(std::ptrdiff_t n, Exec exec, Body&& body) {
  std::exception_ptr failure;
  std::mutex mu;
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel && n > 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard lock(mu);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace hvpol::detail
