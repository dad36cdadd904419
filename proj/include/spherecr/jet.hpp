#pragma once

#include <cmath>

#include "spherecr/types.hpp"

namespace spherecr {

/// Second-order jet in (theta, phi): a complex value together with its exact
/// partial derivatives up to order two. Arithmetic on jets is truncated
/// Taylor arithmetic, so composing the operations below propagates exact
/// derivatives through any expression built from them.
struct Jet2 {
  Complex value{};
  Complex d_theta{};
  Complex d_phi{};
  Complex d_theta_theta{};
  Complex d_theta_phi{};
  Complex d_phi_phi{};
};

inline Jet2 jet_constant(Complex c) { return Jet2{c, {}, {}, {}, {}, {}}; }

inline Jet2 jet_add(const Jet2& a, const Jet2& b) {
  return Jet2{a.value + b.value,
              a.d_theta + b.d_theta,
              a.d_phi + b.d_phi,
              a.d_theta_theta + b.d_theta_theta,
              a.d_theta_phi + b.d_theta_phi,
              a.d_phi_phi + b.d_phi_phi};
}

inline Jet2 jet_mul(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.value = a.value * b.value;
  r.d_theta = a.d_theta * b.value + a.value * b.d_theta;
  r.d_phi = a.d_phi * b.value + a.value * b.d_phi;
  r.d_theta_theta = a.d_theta_theta * b.value + 2.0 * a.d_theta * b.d_theta +
                    a.value * b.d_theta_theta;
  r.d_theta_phi = a.d_theta_phi * b.value + a.d_theta * b.d_phi +
                  a.d_phi * b.d_theta + a.value * b.d_theta_phi;
  r.d_phi_phi = a.d_phi_phi * b.value + 2.0 * a.d_phi * b.d_phi +
                a.value * b.d_phi_phi;
  return r;
}

/// Chain rule for a univariate analytic g applied to jet x, given
/// g0 = g(x.value), g1 = g'(x.value), g2 = g''(x.value).
inline Jet2 jet_compose(Complex g0, Complex g1, Complex g2, const Jet2& x) {
  Jet2 r;
  r.value = g0;
  r.d_theta = g1 * x.d_theta;
  r.d_phi = g1 * x.d_phi;
  r.d_theta_theta = g1 * x.d_theta_theta + g2 * x.d_theta * x.d_theta;
  r.d_theta_phi = g1 * x.d_theta_phi + g2 * x.d_theta * x.d_phi;
  r.d_phi_phi = g1 * x.d_phi_phi + g2 * x.d_phi * x.d_phi;
  return r;
}

inline Jet2 jet_inv(const Jet2& x) {
  if (x.value == Complex{0.0, 0.0}) {
    throw SingularValue("inverse of zero");
  }
  const Complex w = 1.0 / x.value;
  return jet_compose(w, -w * w, 2.0 * w * w * w, x);
}

inline Jet2 jet_exp(const Jet2& x) {
  const Complex e = std::exp(x.value);
  return jet_compose(e, e, e, x);
}

/// Principal branch, argument in (-pi, pi].
inline Jet2 jet_log(const Jet2& x) {
  if (x.value == Complex{0.0, 0.0}) {
    throw SingularValue("log of zero");
  }
  const Complex w = 1.0 / x.value;
  return jet_compose(std::log(x.value), w, -w * w, x);
}

/// Integer power by repeated squaring in the jet ring; negative powers go
/// through jet_inv.
inline Jet2 jet_int_pow(Jet2 x, int p) {
  if (p == 0) return jet_constant(Complex{1.0, 0.0});
  if (p < 0) return jet_inv(jet_int_pow(x, -p));
  Jet2 acc = jet_constant(Complex{1.0, 0.0});
  while (p > 0) {
    if (p & 1) acc = jet_mul(acc, x);
    p >>= 1;
    if (p) x = jet_mul(x, x);
  }
  return acc;
}

/// Conjugation commutes with the real-direction partials, so the jet of
/// conj(f) is the entrywise conjugate.
inline Jet2 jet_conj(const Jet2& x) {
  return Jet2{std::conj(x.value),        std::conj(x.d_theta),
              std::conj(x.d_phi),        std::conj(x.d_theta_theta),
              std::conj(x.d_theta_phi),  std::conj(x.d_phi_phi)};
}

// Primitive jets. Base rules:
//   zeta:  d_theta = 1,              d_phi = i / sin(phi)
//   W:     d_theta = -i W,           d_phi = W / sin(phi)
//   h_k/m: d_theta = -i (k/m) h,     d_phi = (k/m) h / sin(phi)
// Second-order entries are these rules differentiated once more.

inline Jet2 jet_zeta(const AngularPoint& p) {
  const double s = std::sin(p.phi());
  const double c = std::cos(p.phi());
  const double t = std::tan(0.5 * p.phi());
  Jet2 r;
  r.value = Complex{p.theta(), std::log(t)};
  r.d_theta = Complex{1.0, 0.0};
  r.d_phi = Complex{0.0, 1.0 / s};
  r.d_theta_theta = Complex{0.0, 0.0};
  r.d_theta_phi = Complex{0.0, 0.0};
  r.d_phi_phi = Complex{0.0, -c / (s * s)};
  return r;
}

inline Jet2 jet_w(const AngularPoint& p) {
  const double s = std::sin(p.phi());
  const double c = std::cos(p.phi());
  const double t = std::tan(0.5 * p.phi());
  const Complex w = t * Complex{std::cos(p.theta()), -std::sin(p.theta())};
  const Complex i{0.0, 1.0};
  Jet2 r;
  r.value = w;
  r.d_theta = -i * w;
  r.d_phi = w / s;
  r.d_theta_theta = -w;
  r.d_theta_phi = -i * w / s;
  r.d_phi_phi = w * (1.0 - c) / (s * s);
  return r;
}

inline Jet2 jet_hkm(int k, int m, const AngularPoint& p) {
  const double alpha = static_cast<double>(k) / static_cast<double>(m);
  const double s = std::sin(p.phi());
  const double c = std::cos(p.phi());
  const double t = std::tan(0.5 * p.phi());
  // Real positive base, real rational power: no branch ambiguity.
  const double amp = std::pow(t, alpha);
  const Complex h = amp * Complex{std::cos(alpha * p.theta()),
                                  -std::sin(alpha * p.theta())};
  const Complex i{0.0, 1.0};
  Jet2 r;
  r.value = h;
  r.d_theta = -i * alpha * h;
  r.d_phi = alpha * h / s;
  r.d_theta_theta = -alpha * alpha * h;
  r.d_theta_phi = -i * alpha * alpha * h / s;
  r.d_phi_phi = alpha * h * (alpha - c) / (s * s);
  return r;
}

}  // namespace spherecr
