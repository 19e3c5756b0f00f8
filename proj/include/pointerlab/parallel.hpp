#pragma once

// OpenMP shim. Only this header includes <omp.h>.

#include <cstddef>
#include <cstdint>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pointerlab {

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

/// Reads POINTERLAB_THREADS and applies it. Unset or invalid leaves the
/// OpenMP default (logical cores).
void configure_threads_from_env();

/// Runs body(i) for i in [0, n) across OpenMP threads. Each index is
/// independent, so results written to per-index slots are identical for any
/// thread count. The exception of the lowest failing index is rethrown.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace pointerlab
