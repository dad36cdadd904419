// Benchmark comparing the serial reference kernels against the OpenMP
// versions on the two data-parallel hot paths: grid residual scans and the
// tensor quadrature pass behind r3_norm_sq.

#include <chrono>
#include <cstdio>
#include <cstring>

#include "spherecr/kernels.hpp"
#include "spherecr/quadrature.hpp"
#include "spherecr/verify.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace spherecr;

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(
             clock::now().time_since_epoch())
      .count();
}

template <class Fn>
double time_best_of(int reps, Fn&& fn) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const double t0 = now_ms();
    fn();
    best = std::min(best, now_ms() - t0);
  }
  return best;
}

bool bits_equal(double a, double b) {
  return std::memcmp(&a, &b, sizeof(double)) == 0;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both rows run the serial path\n");
#endif

  // Grid residual scan: CR residual of a composite expression over a large
  // grid, exactly the inner loop of the verification checks.
  {
    const GridSpec grid{360, 360, 0.05, 0.05};
    const Expr e = Expr::mul(Expr::hkm(2, 3), Expr::exp(Expr::w()));
    double serial_metric = 0.0, parallel_metric = 0.0;

    kernels::set_parallel_enabled(false);
    const double t_serial = time_best_of(3, [&]() {
      serial_metric = check_cr(e, grid, 1e-10).metric;
    });
    kernels::set_parallel_enabled(true);
    const double t_parallel = time_best_of(3, [&]() {
      parallel_metric = check_cr(e, grid, 1e-10).metric;
    });

    std::printf("grid scan %dx%d       serial %8.2f ms   parallel %8.2f ms   "
                "speedup %.2fx   identical %s\n",
                grid.n_theta, grid.n_phi, t_serial, t_parallel,
                t_serial / t_parallel,
                bits_equal(serial_metric, parallel_metric) ? "yes" : "NO");
  }

  // Tensor quadrature pass: squared norm of a normalized mode over R^3.
  {
    const NormalizedMode mode = g_km(RadialParams{0.5}, FamilyIndex{3, 4});
    auto G = [&mode](const Point3D& q) { return mode(q); };
    const PhiSingularity sing{0.75, 0.75};
    double serial_value = 0.0, parallel_value = 0.0;

    kernels::set_parallel_enabled(false);
    const double t_serial = time_best_of(3, [&]() {
      serial_value = r3_norm_sq(G, sing, 0.5, 1e-8).value;
    });
    kernels::set_parallel_enabled(true);
    const double t_parallel = time_best_of(3, [&]() {
      parallel_value = r3_norm_sq(G, sing, 0.5, 1e-8).value;
    });

    std::printf("norm tensor (3,4)      serial %8.2f ms   parallel %8.2f ms   "
                "speedup %.2fx   identical %s\n",
                t_serial, t_parallel, t_serial / t_parallel,
                bits_equal(serial_value, parallel_value) ? "yes" : "NO");
  }
  return 0;
}
