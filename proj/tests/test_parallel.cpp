#include <cmath>
#include <cstring>
#include <vector>

#include "doctest.h"
#include "spherecr/kernels.hpp"
#include "spherecr/quadrature.hpp"
#include "spherecr/verify.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace spherecr;

namespace {

// Restores the kernel dispatch mode when a test exits.
struct ParallelGuard {
  bool saved = kernels::parallel_enabled();
  ~ParallelGuard() { kernels::set_parallel_enabled(saved); }
};

bool bits_equal(double a, double b) {
  return std::memcmp(&a, &b, sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("map_indexed parallel matches the serial reference bit for bit") {
  const std::size_t n = 10007;
  auto fn = [](std::size_t i) {
    const double x = 0.57 * static_cast<double>(i % 97) + 0.01;
    return std::sin(x) * std::exp(-x) + std::sqrt(x);
  };
  std::vector<double> serial(n), parallel(n);
  kernels::map_indexed_serial(n, serial.data(), fn);
  kernels::map_indexed_parallel(n, parallel.data(), fn);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(bits_equal(serial[i], parallel[i]));
  }
  CHECK(kernels::max_abs(serial) == kernels::max_abs(parallel));
  CHECK(bits_equal(kernels::sum_ordered(serial),
                   kernels::sum_ordered(parallel)));
}

TEST_CASE("exceptions escape the parallel loop exactly once") {
  const std::size_t n = 256;
  std::vector<double> out(n);
  auto fn = [](std::size_t i) -> double {
    if (i == 100) throw std::runtime_error("boom");
    return static_cast<double>(i);
  };
  CHECK_THROWS_AS(kernels::map_indexed_parallel(n, out.data(), fn),
                  std::runtime_error);
  CHECK_THROWS_AS(kernels::map_indexed_serial(n, out.data(), fn),
                  std::runtime_error);
}

TEST_CASE("grid checks are identical under both kernel modes") {
  ParallelGuard guard;
  const GridSpec grid{20, 20, 0.3, 0.6};
  const Expr e = Expr::mul(Expr::hkm(2, 3), Expr::exp(Expr::w()));

  kernels::set_parallel_enabled(false);
  const CheckReport serial = check_cr(e, grid, 1e-10);
  const CheckReport harm_s = check_harmonicity(e, grid, 1e-10);

  kernels::set_parallel_enabled(true);
  const CheckReport parallel = check_cr(e, grid, 1e-10);
  const CheckReport harm_p = check_harmonicity(e, grid, 1e-10);

  CHECK(bits_equal(serial.metric, parallel.metric));
  CHECK(bits_equal(harm_s.metric, harm_p.metric));
  CHECK(serial.status == parallel.status);
}

TEST_CASE("norm quadrature is identical under both kernel modes") {
  ParallelGuard guard;
  const NormalizedMode mode = g_km(RadialParams{1.0}, FamilyIndex{2, 3});
  auto G = [&mode](const Point3D& q) { return mode(q); };
  const PhiSingularity sing{mode.index().ratio(), mode.index().ratio()};

  kernels::set_parallel_enabled(false);
  const QuadratureResult serial = r3_norm_sq(G, sing, 1.0, 1e-7);
  kernels::set_parallel_enabled(true);
  const QuadratureResult parallel = r3_norm_sq(G, sing, 1.0, 1e-7);

  CHECK(bits_equal(serial.value, parallel.value));
  CHECK(bits_equal(serial.abs_error_estimate, parallel.abs_error_estimate));
  CHECK(serial.evaluations == parallel.evaluations);
}

#ifdef _OPENMP
TEST_CASE("results do not depend on the thread count") {
  ParallelGuard guard;
  kernels::set_parallel_enabled(true);
  const GridSpec grid{16, 16, 0.3, 0.6};
  const Expr e = Expr::exp(Expr::w());

  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const double m1 = check_harmonicity(e, grid, 1e-10).metric;
  omp_set_num_threads(3);
  const double m3 = check_harmonicity(e, grid, 1e-10).metric;
  omp_set_num_threads(saved);

  CHECK(bits_equal(m1, m3));
}
#endif
