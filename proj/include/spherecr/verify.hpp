#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spherecr/expr.hpp"
#include "spherecr/family.hpp"
#include "spherecr/operators.hpp"
#include "spherecr/types.hpp"

namespace spherecr {

/// Rectangular evaluation grid bounded away from the cut and the poles.
/// "Almost all the sphere" is operationalized by the margins; FD-based
/// checks additionally require the margins to exceed the stencil reach.
struct GridSpec {
  int n_theta = 40;
  int n_phi = 40;
  double margin_theta = 0.3;
  double margin_phi = 0.6;

  GridSpec(int nt, int np, double mt, double mp);
  std::vector<AngularPoint> points() const;  // row-major, phi fastest
};

enum class CheckStatus { Pass, Fail, Error };

std::string to_string(CheckStatus s);

/// One named verification outcome. status == Pass exactly when
/// metric <= tolerance; Error carries a NaN metric (serialized as null).
struct CheckReport {
  std::string name;
  CheckStatus status = CheckStatus::Error;
  double metric = 0.0;
  double tolerance = 0.0;
  long long points_tested = 0;
  std::string details;
};

struct SuiteReport {
  std::vector<CheckReport> checks;
  double wall_time_ms = 0.0;
  bool all_pass() const;
};

/// Acceptance model for discretization-limited checks: the discrepancy or
/// residual must shrink like h^expected_order along h_sequence.
struct FitModel {
  double expected_order = 2.0;
  double slope_tolerance = 0.2;
  std::vector<double> h_sequence{8e-3, 4e-3, 2e-3, 1e-3};
  double zero_floor = 1e-12;  // discrepancies below this count as exact
};

/// Angular grid plus radial sample points for the separable 3D checks.
struct Grid3DSpec {
  GridSpec angular{6, 6, 0.7, 0.7};
  std::vector<double> radii{0.5, 1.0, 2.0};
};

// Every check evaluates its metric over the full grid with exact jets
// unless stated otherwise, and never throws for non-holomorphic input:
// claims that only concern holomorphic functions report status Error with
// a "not applicable" note instead.

/// Max of the two CR residuals |du/dtheta - sin(phi) dv/dphi| and
/// |dv/dtheta + sin(phi) du/dphi|. Computed for any input; a non-holomorphic
/// tree is annotated in details (and will generically fail).
CheckReport check_cr(const Expr& f, const GridSpec& g, double tol,
                     const std::string& name = "cr");

/// CR residual of f*g2 plus the pointwise component identities of the
/// product (u~ = u u' - v v', v~ = u v' + u' v). Not applicable unless both
/// factors are holomorphic.
CheckReport check_product_closure(const Expr& f, const Expr& g2,
                                  const GridSpec& g, double tol,
                                  const std::string& name = "product_closure");

/// CR residual of 1/f, skipping grid points with |f| < 1e-8 (count reported).
CheckReport check_inverse_closure(const Expr& f, const GridSpec& g, double tol,
                                  const std::string& name = "inverse_closure");

enum class OuterFn { Exp, Log, IntPow };

/// CR residual of outer(f). Log skips near-zero points and flags paths
/// crossing the principal-branch cut in details.
CheckReport check_composition(OuterFn outer, int power, const Expr& f,
                              const GridSpec& g, double tol,
                              const std::string& name = "composition");

/// Max over the grid of |e1 - e2|; used for the documented pointwise
/// coincidences (e.g. exp(-i*zeta) against W).
CheckReport check_pointwise_equal(const Expr& e1, const Expr& e2,
                                  const GridSpec& g, double tol,
                                  const std::string& name);

/// Max of |Re Lambda f| and |Im Lambda f| from exact jets.
CheckReport check_harmonicity(const Expr& f, const GridSpec& g, double tol,
                              const std::string& name = "harmonicity");

/// Max of |grad u . grad v| from exact jets.
CheckReport check_gradient_orthogonality(const Expr& f, const GridSpec& g,
                                         double tol,
                                         const std::string& name = "gradient");

/// Compares the direct and factorized FD Laplacians across fit.h_sequence;
/// passes when the max discrepancy either sits at the rounding floor or
/// fits the expected-order model (measured slope within slope_tolerance).
/// Metric is |slope - expected_order|; the fitted constant is reported.
CheckReport check_factorization(const ComplexField& f, const GridSpec& g,
                                const FitModel& fit,
                                const std::string& name = "factorization");

/// Expression variant: additionally requires the two exact-jet routes to
/// agree to rounding accuracy.
CheckReport check_factorization(const Expr& f, const GridSpec& g,
                                const FitModel& fit,
                                const std::string& name = "factorization");

/// Adaptive quadrature against the closed form 2 k pi / (m sin(k pi/m)),
/// relative tolerance tol.
CheckReport check_phi_integral(const FamilyIndex& idx, double tol,
                               const std::string& name = "phi_integral");

/// |r3_norm_sq(g_km) - 1| <= tol.
CheckReport check_unit_norm(const RadialParams& rp, const FamilyIndex& idx,
                            double tol,
                            const std::string& name = "unit_norm");

/// FD residual of (-Laplacian + nu) g_km: the order report fits the decay
/// of the normalized residual along fit.h_sequence; the residual report
/// evaluates it at h_final against tol_final.
std::vector<CheckReport> check_schrodinger(const RadialParams& rp,
                                           const FamilyIndex& idx,
                                           const Grid3DSpec& g3,
                                           const FitModel& fit,
                                           double h_final, double tol_final,
                                           const std::string& name = "schrodinger");

/// Purely radial case (angular part 1) with exact radial derivatives.
CheckReport check_schrodinger_radial_exact(const RadialParams& rp,
                                           const std::vector<double>& radii,
                                           double tol,
                                           const std::string& name =
                                               "schrodinger/radial_exact");

// --- negative-control wrappers -------------------------------------------
// A control passes when the wrapped check failed as intended. The reported
// metric is max(0, floor - underlying_metric) against tolerance 0, so the
// pass/fail convention of CheckReport is preserved.

CheckReport expect_fail(CheckReport underlying, double metric_floor,
                        const std::string& name);
CheckReport expect_error(CheckReport underlying, const std::string& name);

// --- randomized holomorphic expressions -----------------------------------

/// Deterministic splitmix64 stream; identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next_u64();
  double uniform();                    // [0, 1)
  int uniform_int(int lo, int hi);     // inclusive bounds

 private:
  std::uint64_t state_;
};

/// Random conj-free tree of depth <= max_depth, resampled until it is
/// well-conditioned on the given points: finite, |f| <= 1e4, and first
/// derivatives no larger than 50 * (1 + |f|). The rejection loop draws from
/// the same stream, so the sequence of accepted trees is reproducible.
Expr random_holomorphic_expr(Rng& rng, int max_depth,
                             const std::vector<AngularPoint>& points);

/// Uniform random interior points bounded away from cut and poles.
std::vector<AngularPoint> random_points(Rng& rng, int count,
                                        double margin_theta,
                                        double margin_phi);

// --- suite -----------------------------------------------------------------

struct SuiteConfig {
  GridSpec grid{40, 40, 0.3, 0.6};
  GridSpec fd_grid{10, 10, 0.5, 0.7};  // coarser grid for stencil-based checks
  int family_m_max = 8;
  int sweep_m_max = 12;
  int random_expr_count = 200;
  int random_expr_depth = 6;
  int random_point_count = 100;
  std::uint64_t seed = 0x5EED;
  double tol_identity = 1e-10;
  double tol_nullity = 1e-12;    // relative: |D f| <= tol * (1 + |f|)
  double tol_pointwise = 1e-12;
  double tol_phi_integral = 1e-8;
  double tol_norm = 1e-6;
  std::vector<double> norm_n_values{0.5, 1.0, 2.0};
  FitModel fit{};
  Grid3DSpec grid3d{};
  double schrodinger_h_final = 1e-4;
  double tol_schrodinger_final = 1e-6;
  double tol_radial_exact = 1e-10;
  bool include_controls = true;
};

/// Runs the configured checks in a fixed order. Deterministic: identical
/// configs produce identical reports except wall_time_ms.
SuiteReport run_suite(const SuiteConfig& cfg);

}  // namespace spherecr
