#pragma once

#include <cmath>
#include <cstddef>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spherecr::kernels {

/// Global switch between the OpenMP kernels and the serial reference
/// implementations. Defaults to parallel when compiled with OpenMP.
bool parallel_enabled();
void set_parallel_enabled(bool enabled);

/// out[i] = fn(i) for i in [0, n). Reference implementation.
template <class F>
void map_indexed_serial(std::size_t n, double* out, F&& fn) {
  for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
}

/// OpenMP variant of map_indexed_serial. Each slot is written exactly once,
/// so the result is bit-identical to the serial loop for any thread count.
/// Exceptions raised by fn are captured and rethrown after the loop.
template <class F>
void map_indexed_parallel(std::size_t n, double* out, F&& fn) {
#ifdef _OPENMP
  std::exception_ptr error = nullptr;
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    try {
      out[i] = fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(spherecr_map_indexed_error)
      if (!error) error = std::current_exception();
      out[i] = std::nan("");
    }
  }
  if (error) std::rethrow_exception(error);
#else
  map_indexed_serial(n, out, fn);
#endif
}

template <class F>
void map_indexed(std::size_t n, double* out, F&& fn) {
  if (parallel_enabled()) {
    map_indexed_parallel(n, out, fn);
  } else {
    map_indexed_serial(n, out, fn);
  }
}

/// Reductions over the filled buffers run serially in index order so that
/// results do not depend on the thread count.
double max_abs(const std::vector<double>& v);
double sum_ordered(const std::vector<double>& v);

}  // namespace spherecr::kernels
