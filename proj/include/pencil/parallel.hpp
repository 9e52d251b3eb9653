#pragma once

#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pencil {

enum class Execution { Serial, Parallel };

/// Runs body(i) for i in [0, n).  With Execution::Parallel the iterations are
/// spread over OpenMP threads; the first exception thrown by any iteration is
/// rethrown after the loop.
template <class Body>
void for_each_index(int n, Execution exec, Body&& body) {
  if (exec == Execution::Serial) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex mu;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace pencil
