#pragma once

#include "spherecr/expr.hpp"
#include "spherecr/types.hpp"

namespace spherecr {

/// Index pair (k, m) of the family member h(k/m), constrained to
/// 1 <= |k| <= m - 1 with m >= 2. The k = 0 member exists only as the
/// continuity limit and is created through zero_limit().
class FamilyIndex {
 public:
  FamilyIndex(int k, int m);
  static FamilyIndex zero_limit(int m);

  int k() const { return k_; }
  int m() const { return m_; }
  double ratio() const { return static_cast<double>(k_) / m_; }

 private:
  FamilyIndex(int k, int m, bool /*unchecked*/) : k_(k), m_(m) {}
  int k_;
  int m_;
};

/// Inverse length scale of the radial factor exp(-n r); n > 0 so the
/// product is square-integrable.
struct RadialParams {
  double n;
  explicit RadialParams(double n_) : n(n_) {
    if (!(n > 0.0)) throw DomainError("radial parameter n must be positive");
  }
};

/// The radial potential n^2 - 2n/r.
double potential_nu(const RadialParams& rp, double r);

/// exp(-n r); solves g'' + (2/r) g' - nu g = 0 for the potential above.
double radial_solution(const RadialParams& rp, double r);

/// exp(-n r) with its exact derivatives -n g and n^2 g.
RadialDerivatives radial_solution_jet(const RadialParams& rp, double r);

/// The family member as an expression tree; the k = 0 limit is constant 1.
Expr h_km(const FamilyIndex& idx);

/// Closed form of the phi integral of tan(phi/2)^(2k/m) sin(phi):
/// 2 k pi / (m sin(k pi / m)), continued by its limit 2 at k = 0.
/// Even in k.
double phi_integral_closed_form(const FamilyIndex& idx);

/// The constant (1/pi) sqrt(n^3 m sin(k pi/m) / k) that makes the product
/// of exp(-n r) and h(k/m) have unit L2 norm over R^3; sqrt(n^3/pi) at the
/// k = 0 limit.
double normalization_constant(const RadialParams& rp, const FamilyIndex& idx);

/// The L2-normalized mode: constant * tan(phi/2)^(k/m) * exp(-(n r + i k
/// theta / m)). Also exposes the compositional route (constant * radial
/// solution * expression tree), which must agree pointwise.
class NormalizedMode {
 public:
  NormalizedMode(RadialParams rp, FamilyIndex idx);

  Complex operator()(const Point3D& q) const {
    return eval_closed(q.r(), q.angles());
  }
  /// Closed-form route; r = 0 is allowed here.
  Complex eval_closed(double r, const AngularPoint& a) const;
  /// Constant * radial_solution * eval(h_km) route.
  Complex eval_composed(double r, const AngularPoint& a) const;

  double constant() const { return constant_; }
  const FamilyIndex& index() const { return idx_; }
  const RadialParams& params() const { return rp_; }
  const Expr& angular_part() const { return angular_; }

 private:
  RadialParams rp_;
  FamilyIndex idx_;
  double constant_;
  Expr angular_;
};

inline NormalizedMode g_km(const RadialParams& rp, const FamilyIndex& idx) {
  return NormalizedMode(rp, idx);
}

}  // namespace spherecr
