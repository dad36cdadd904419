#pragma once

// Test-side oracles, deliberately independent of the library's quadrature
// and jet code paths: a tanh-sinh integrator for the singular-endpoint
// integrals and plain central differences on eval() for derivative checks.

#include <cmath>
#include <functional>

#include "spherecr/expr.hpp"

namespace oracle {

// Tanh-sinh rule on (a, b). Handles integrable endpoint singularities; the
// abscissas approach the endpoints double-exponentially. Nodes that round
// onto an endpoint are skipped (their weights are negligible for the
// exponents used in these tests, which bounds the oracle accuracy at
// roughly (1e-16)^(2 - 2a) near a singular endpoint of power a).
inline double ts_integrate(const std::function<double(double)>& f, double a,
                           double b, double step = 1.0 / 16.0,
                           double t_max = 4.0) {
  const double mid = 0.5 * (a + b);
  const double rad = 0.5 * (b - a);
  double sum = 0.0;
  const int n = static_cast<int>(t_max / step);
  for (int k = -n; k <= n; ++k) {
    const double t = k * step;
    const double u = 0.5 * spherecr::kPi * std::sinh(t);
    const double x = std::tanh(u);
    const double node = mid + rad * x;
    if (node <= a || node >= b) continue;
    const double cu = std::cosh(u);
    const double w = 0.5 * spherecr::kPi * std::cosh(t) / (cu * cu);
    sum += w * f(node);
  }
  return sum * rad * step;
}

// Central differences of eval(); first order in each direction and the
// three second-order stencils.
inline spherecr::Complex fd_theta(const spherecr::Expr& e,
                                  const spherecr::AngularPoint& p, double h) {
  using spherecr::AngularPoint;
  return (eval(e, AngularPoint(p.theta() + h, p.phi())) -
          eval(e, AngularPoint(p.theta() - h, p.phi()))) /
         (2.0 * h);
}

inline spherecr::Complex fd_phi(const spherecr::Expr& e,
                                const spherecr::AngularPoint& p, double h) {
  using spherecr::AngularPoint;
  return (eval(e, AngularPoint(p.theta(), p.phi() + h)) -
          eval(e, AngularPoint(p.theta(), p.phi() - h))) /
         (2.0 * h);
}

inline spherecr::Complex fd_theta_theta(const spherecr::Expr& e,
                                        const spherecr::AngularPoint& p,
                                        double h) {
  using spherecr::AngularPoint;
  return (eval(e, AngularPoint(p.theta() + h, p.phi())) -
          2.0 * eval(e, p) +
          eval(e, AngularPoint(p.theta() - h, p.phi()))) /
         (h * h);
}

inline spherecr::Complex fd_phi_phi(const spherecr::Expr& e,
                                    const spherecr::AngularPoint& p,
                                    double h) {
  using spherecr::AngularPoint;
  return (eval(e, AngularPoint(p.theta(), p.phi() + h)) -
          2.0 * eval(e, p) +
          eval(e, AngularPoint(p.theta(), p.phi() - h))) /
         (h * h);
}

inline spherecr::Complex fd_theta_phi(const spherecr::Expr& e,
                                      const spherecr::AngularPoint& p,
                                      double h) {
  using spherecr::AngularPoint;
  return (eval(e, AngularPoint(p.theta() + h, p.phi() + h)) -
          eval(e, AngularPoint(p.theta() + h, p.phi() - h)) -
          eval(e, AngularPoint(p.theta() - h, p.phi() + h)) +
          eval(e, AngularPoint(p.theta() - h, p.phi() - h))) /
         (4.0 * h * h);
}

// Least-squares slope of log(err) against log(h).
inline double slope(const std::vector<double>& hs,
                    const std::vector<double>& errs) {
  double mx = 0.0, my = 0.0;
  const std::size_t n = hs.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    lx[i] = std::log(hs[i]);
    ly[i] = std::log(errs[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace oracle
