#pragma once

#include <functional>

#include "spherecr/types.hpp"

namespace spherecr {

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  long long evaluations = 0;
};

/// Adaptive subdivision budget exhausted before the tolerance was met.
/// Carries the partial value and its (unmet) error estimate.
class NoConvergence : public std::runtime_error {
 public:
  NoConvergence(const std::string& what, QuadratureResult partial)
      : std::runtime_error(what), partial_(partial) {}
  const QuadratureResult& partial() const { return partial_; }

 private:
  QuadratureResult partial_;
};

/// Endpoint behavior of a phi integrand on (0, pi): the integrand looks like
/// tan(phi/2)^(2a) times a factor vanishing like sin(phi) at the ends, with
/// a = exponent_at_0 near phi = 0 and a = exponent_at_pi near phi = pi.
/// Integrability requires exponent_at_0 > -1 and exponent_at_pi < 1.
struct PhiSingularity {
  double exponent_at_0 = 0.0;
  double exponent_at_pi = 0.0;

  PhiSingularity(double a0, double api) : exponent_at_0(a0), exponent_at_pi(api) {
    if (!(a0 > -1.0)) {
      throw DomainError("phi integrand exponent at 0 must exceed -1");
    }
    if (!(api < 1.0)) {
      throw DomainError("phi integrand exponent at pi must be below 1");
    }
  }
};

using RealFn1D = std::function<double(double)>;
using SphereFn = std::function<double(const AngularPoint&)>;
using VolumeFn = std::function<Complex(const Point3D&)>;

/// Periodic trapezoid (midpoint phase) on (0, 2*pi) with n_nodes points,
/// spectrally accurate for smooth periodic f. Nodes are shifted off the cut
/// at theta = 0. The error estimate comes from comparing against 2*n nodes;
/// the returned value is the finer of the two.
QuadratureResult integrate_theta(const RealFn1D& f, int n_nodes);

/// Integral of f over (0, pi) where f has the declared endpoint behavior.
/// Uses the substitution t = tan(phi/2) folded onto (0, 1], then adaptive
/// Gauss-Kronrod bisection with the mesh pre-graded toward the singular
/// endpoint; refines until abs_error_estimate <= tol * |value|.
QuadratureResult integrate_phi_singular(const RealFn1D& f,
                                        const PhiSingularity& sing, double tol);

/// Integral of f over (0, inf) for f decaying like C * r^2 * exp(-rate * r).
/// Truncates at R chosen so the envelope tail is below tol/2 (the envelope
/// constant is estimated by sampling, then R is doubled), and integrates
/// (0, R) adaptively to the remaining budget.
QuadratureResult integrate_radial(const RealFn1D& f, double decay_rate,
                                  double tol);

/// Integral of F over the unit sphere (measure sin(phi) dphi dtheta), as the
/// product of the periodic theta rule and the singular phi integrator.
QuadratureResult sphere_integral(const SphereFn& F, const PhiSingularity& sing,
                                 int n_theta, double tol);

/// Squared L2 norm of G over R^3. decay_rate describes |G| itself (so |G|^2
/// decays at twice that rate); sing describes |G|^2 in the same convention
/// as integrate_phi_singular. Evaluates a product rule over the three
/// directions; the angular x radial tensor pass is a data-parallel kernel.
QuadratureResult r3_norm_sq(const VolumeFn& G, const PhiSingularity& sing,
                            double decay_rate, double tol);

}  // namespace spherecr
