#include "spherecr/family.hpp"

#include <cmath>
#include <string>

namespace spherecr {

FamilyIndex::FamilyIndex(int k, int m) : k_(k), m_(m) {
  if (m < 2) {
    throw InvalidIndex("family index requires m >= 2, got m = " +
                       std::to_string(m));
  }
  if (k == 0) {
    throw InvalidIndex("k = 0 is the limit member; use zero_limit(m)");
  }
  if (std::abs(k) > m - 1) {
    throw InvalidIndex("family index requires |k| <= m - 1, got k = " +
                       std::to_string(k) + ", m = " + std::to_string(m));
  }
}

FamilyIndex FamilyIndex::zero_limit(int m) {
  if (m < 2) {
    throw InvalidIndex("family index requires m >= 2, got m = " +
                       std::to_string(m));
  }
  return FamilyIndex(0, m, true);
}

double potential_nu(const RadialParams& rp, double r) {
  if (!(r > 0.0)) throw DomainError("potential_nu requires r > 0");
  return rp.n * rp.n - 2.0 * rp.n / r;
}

double radial_solution(const RadialParams& rp, double r) {
  if (!(r >= 0.0)) throw DomainError("radial_solution requires r >= 0");
  return std::exp(-rp.n * r);
}

RadialDerivatives radial_solution_jet(const RadialParams& rp, double r) {
  const double g = radial_solution(rp, r);
  return RadialDerivatives{g, -rp.n * g, rp.n * rp.n * g};
}

Expr h_km(const FamilyIndex& idx) { return Expr::hkm(idx.k(), idx.m()); }

double phi_integral_closed_form(const FamilyIndex& idx) {
  if (idx.k() == 0) return 2.0;  // continuity limit, equals the sin integral
  const double ratio = idx.ratio();
  return 2.0 * ratio * kPi / std::sin(ratio * kPi);
}

double normalization_constant(const RadialParams& rp, const FamilyIndex& idx) {
  const double n3 = rp.n * rp.n * rp.n;
  if (idx.k() == 0) return std::sqrt(n3 / kPi);  // limit of m sin(k pi/m)/k
  const double s = static_cast<double>(idx.m()) *
                   std::sin(idx.ratio() * kPi) / static_cast<double>(idx.k());
  return std::sqrt(n3 * s) / kPi;
}

NormalizedMode::NormalizedMode(RadialParams rp, FamilyIndex idx)
    : rp_(rp),
      idx_(idx),
      constant_(normalization_constant(rp, idx)),
      angular_(idx.k() == 0 ? Expr::constant(Complex{1.0, 0.0})
                            : Expr::hkm(idx.k(), idx.m())) {}

Complex NormalizedMode::eval_closed(double r, const AngularPoint& a) const {
  if (!(r >= 0.0)) throw DomainError("mode evaluation requires r >= 0");
  const double ratio = idx_.ratio();
  const double amp = std::pow(std::tan(0.5 * a.phi()), ratio);
  const double phase = ratio * a.theta();
  return constant_ * amp * std::exp(-rp_.n * r) *
         Complex{std::cos(phase), -std::sin(phase)};
}

Complex NormalizedMode::eval_composed(double r, const AngularPoint& a) const {
  return constant_ * radial_solution(rp_, r) * eval(angular_, a);
}

}  // namespace spherecr
