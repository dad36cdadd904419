#pragma once

#include <functional>
#include <vector>

#include "spherecr/expr.hpp"
#include "spherecr/types.hpp"

namespace spherecr {

/// Central-difference stencil. Steps are capped at half the distance from
/// the evaluation point to the nearest domain boundary (cut or pole);
/// operations refuse with DomainError instead of reflecting.
struct StencilSpec {
  int order = 2;  // 2 or 4
  double h_theta = 1e-3;
  double h_phi = 1e-3;

  StencilSpec(int order_, double ht, double hp)
      : order(order_), h_theta(ht), h_phi(hp) {
    if (order != 2 && order != 4) {
      throw std::invalid_argument("stencil order must be 2 or 4");
    }
    if (!(ht > 0.0) || !(hp > 0.0)) {
      throw std::invalid_argument("stencil steps must be positive");
    }
  }
};

using ComplexField = std::function<Complex(const AngularPoint&)>;
using RealField = std::function<double(const AngularPoint&)>;

ComplexField to_field(const Expr& e);

/// Finite-difference D f = d_theta f + i sin(phi) d_phi f.
Complex apply_D(const ComplexField& f, const AngularPoint& p,
                const StencilSpec& s);

/// Finite-difference conjugate factor d_theta f - i sin(phi) d_phi f.
Complex apply_Dbar(const ComplexField& f, const AngularPoint& p,
                   const StencilSpec& s);

/// Finite-difference angular Laplacian
/// (1/sin^2 phi) d2_theta + d2_phi + cot(phi) d_phi.
Complex angular_laplacian(const ComplexField& f, const AngularPoint& p,
                          const StencilSpec& s);

/// Exact angular Laplacian from the second-order jet.
Complex angular_laplacian(const Expr& f, const AngularPoint& p);

/// (1/sin^2 phi) Dbar(D f) by nested stencils. The nested footprint is twice
/// the plain one, which the domain check accounts for.
Complex factorized_laplacian(const ComplexField& f, const AngularPoint& p,
                             const StencilSpec& s);

/// (1/sin^2 phi) Dbar(D f) assembled exactly from the jet of f.
Complex factorized_laplacian(const Expr& f, const AngularPoint& p);

/// A radial profile providing its own first two derivatives.
using RadialFn = std::function<RadialDerivatives(double)>;

/// Wraps a plain radial function with central finite differences of the
/// requested order.
RadialFn make_fd_radial(std::function<double(double)> g, double h, int order);

/// Laplacian of the separable product g(r) h(theta, phi):
/// h (g'' + (2/r) g') + (g / r^2) Lambda h, with Lambda h by stencil.
Complex laplacian3d_separable(const RadialFn& g, const ComplexField& h,
                              const Point3D& q, const StencilSpec& s);

/// Same separable Laplacian with Lambda h taken exactly from the jet.
Complex laplacian3d_separable(const RadialFn& g, const Expr& h,
                              const Point3D& q);

/// Unit-sphere gradient pairing d_phi a d_phi b + (1/sin^2 phi) d_theta a
/// d_theta b by finite differences.
double gradient_dot(const RealField& a, const RealField& b,
                    const AngularPoint& p, const StencilSpec& s);

/// Exact gradient pairing between the real and imaginary parts of f.
double gradient_dot(const Expr& f, const AngularPoint& p);

/// Least-squares slope of log |fd(h) - exact| against log h. The step
/// sequence must have at least three entries, each half the previous.
/// Throws DegenerateSequence when any error sits at the rounding floor.
double convergence_order(const std::function<Complex(double)>& fd_at_h,
                         Complex exact, const std::vector<double>& h_sequence);

}  // namespace spherecr
