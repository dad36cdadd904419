#include "spherecr/kernels.hpp"

#include <atomic>

namespace spherecr::kernels {

namespace {

std::atomic<bool>& parallel_flag() {
#ifdef _OPENMP
  static std::atomic<bool> flag{true};
#else
  static std::atomic<bool> flag{false};
#endif
  return flag;
}

}  // namespace

bool parallel_enabled() { return parallel_flag().load(std::memory_order_relaxed); }

void set_parallel_enabled(bool enabled) {
  parallel_flag().store(enabled, std::memory_order_relaxed);
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) {
    const double a = std::fabs(x);
    if (a > m) m = a;
  }
  return m;
}

double sum_ordered(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace spherecr::kernels
