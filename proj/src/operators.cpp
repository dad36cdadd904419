#include "spherecr/operators.hpp"

#include <algorithm>
#include <cmath>

namespace spherecr {

namespace {

// Reach of the stencil in units of h: order 2 touches +-h, order 4 +-2h.
double stencil_reach(const StencilSpec& s) { return s.order == 2 ? 1.0 : 2.0; }

void require_inside(const AngularPoint& p, const StencilSpec& s, int nesting) {
  const double reach = stencil_reach(s) * nesting;
  const double margin_theta = std::min(p.theta(), kTwoPi - p.theta());
  const double margin_phi = std::min(p.phi(), kPi - p.phi());
  if (reach * s.h_theta > 0.5 * margin_theta) {
    throw DomainError("theta stencil exceeds half the distance to the cut");
  }
  if (reach * s.h_phi > 0.5 * margin_phi) {
    throw DomainError("phi stencil exceeds half the distance to a pole");
  }
}

enum class Axis { Theta, Phi };

AngularPoint shift(const AngularPoint& p, Axis axis, double dx) {
  if (axis == Axis::Theta) return AngularPoint(p.theta() + dx, p.phi());
  return AngularPoint(p.theta(), p.phi() + dx);
}

Complex d1(const ComplexField& f, const AngularPoint& p, Axis axis,
           double h, int order) {
  if (order == 2) {
    return (f(shift(p, axis, h)) - f(shift(p, axis, -h))) / (2.0 * h);
  }
  return (-f(shift(p, axis, 2.0 * h)) + 8.0 * f(shift(p, axis, h)) -
          8.0 * f(shift(p, axis, -h)) + f(shift(p, axis, -2.0 * h))) /
         (12.0 * h);
}

Complex d2(const ComplexField& f, const AngularPoint& p, Axis axis,
           double h, int order) {
  const Complex f0 = f(p);
  if (order == 2) {
    return (f(shift(p, axis, h)) - 2.0 * f0 + f(shift(p, axis, -h))) / (h * h);
  }
  return (-f(shift(p, axis, 2.0 * h)) + 16.0 * f(shift(p, axis, h)) -
          30.0 * f0 + 16.0 * f(shift(p, axis, -h)) -
          f(shift(p, axis, -2.0 * h))) /
         (12.0 * h * h);
}

}  // namespace

ComplexField to_field(const Expr& e) {
  return [e](const AngularPoint& p) { return eval(e, p); };
}

Complex apply_D(const ComplexField& f, const AngularPoint& p,
                const StencilSpec& s) {
  require_inside(p, s, 1);
  return d1(f, p, Axis::Theta, s.h_theta, s.order) +
         Complex{0.0, std::sin(p.phi())} * d1(f, p, Axis::Phi, s.h_phi, s.order);
}

Complex apply_Dbar(const ComplexField& f, const AngularPoint& p,
                   const StencilSpec& s) {
  require_inside(p, s, 1);
  return d1(f, p, Axis::Theta, s.h_theta, s.order) -
         Complex{0.0, std::sin(p.phi())} * d1(f, p, Axis::Phi, s.h_phi, s.order);
}

Complex angular_laplacian(const ComplexField& f, const AngularPoint& p,
                          const StencilSpec& s) {
  require_inside(p, s, 1);
  const double sphi = std::sin(p.phi());
  const double cphi = std::cos(p.phi());
  return d2(f, p, Axis::Theta, s.h_theta, s.order) / (sphi * sphi) +
         d2(f, p, Axis::Phi, s.h_phi, s.order) +
         (cphi / sphi) * d1(f, p, Axis::Phi, s.h_phi, s.order);
}

Complex angular_laplacian(const Expr& f, const AngularPoint& p) {
  const Jet2 j = eval_jet(f, p);
  const double sphi = std::sin(p.phi());
  const double cphi = std::cos(p.phi());
  return j.d_theta_theta / (sphi * sphi) + j.d_phi_phi +
         (cphi / sphi) * j.d_phi;
}

Complex factorized_laplacian(const ComplexField& f, const AngularPoint& p,
                             const StencilSpec& s) {
  require_inside(p, s, 2);
  ComplexField df = [&f, &s](const AngularPoint& q) {
    return apply_D(f, q, s);
  };
  const double sphi = std::sin(p.phi());
  return apply_Dbar(df, p, s) / (sphi * sphi);
}

Complex factorized_laplacian(const Expr& f, const AngularPoint& p) {
  const Jet2 j = eval_jet(f, p);
  const double sphi = std::sin(p.phi());
  const double cphi = std::cos(p.phi());
  const Complex i{0.0, 1.0};
  // d_theta(D f) and d_phi(D f) from the second-order jet of f.
  const Complex dtheta_Df = j.d_theta_theta + i * sphi * j.d_theta_phi;
  const Complex dphi_Df = j.d_theta_phi + i * cphi * j.d_phi + i * sphi * j.d_phi_phi;
  return (dtheta_Df - i * sphi * dphi_Df) / (sphi * sphi);
}

RadialFn make_fd_radial(std::function<double(double)> g, double h, int order) {
  if (order != 2 && order != 4) {
    throw std::invalid_argument("radial stencil order must be 2 or 4");
  }
  if (!(h > 0.0)) throw std::invalid_argument("radial step must be positive");
  return [g = std::move(g), h, order](double r) {
    RadialDerivatives d;
    d.value = g(r);
    if (order == 2) {
      const double gp = g(r + h), gm = g(r - h);
      d.d1 = (gp - gm) / (2.0 * h);
      d.d2 = (gp - 2.0 * d.value + gm) / (h * h);
    } else {
      const double gp = g(r + h), gm = g(r - h);
      const double gpp = g(r + 2.0 * h), gmm = g(r - 2.0 * h);
      d.d1 = (-gpp + 8.0 * gp - 8.0 * gm + gmm) / (12.0 * h);
      d.d2 = (-gpp + 16.0 * gp - 30.0 * d.value + 16.0 * gm - gmm) /
             (12.0 * h * h);
    }
    return d;
  };
}

Complex laplacian3d_separable(const RadialFn& g, const ComplexField& h,
                              const Point3D& q, const StencilSpec& s) {
  const RadialDerivatives rd = g(q.r());
  const Complex hv = h(q.angles());
  const Complex lap_h = angular_laplacian(h, q.angles(), s);
  return hv * (rd.d2 + 2.0 / q.r() * rd.d1) + rd.value / (q.r() * q.r()) * lap_h;
}

Complex laplacian3d_separable(const RadialFn& g, const Expr& h,
                              const Point3D& q) {
  const RadialDerivatives rd = g(q.r());
  const Complex hv = eval(h, q.angles());
  const Complex lap_h = angular_laplacian(h, q.angles());
  return hv * (rd.d2 + 2.0 / q.r() * rd.d1) + rd.value / (q.r() * q.r()) * lap_h;
}

double gradient_dot(const RealField& a, const RealField& b,
                    const AngularPoint& p, const StencilSpec& s) {
  require_inside(p, s, 1);
  ComplexField ca = [&a](const AngularPoint& q) { return Complex{a(q), 0.0}; };
  ComplexField cb = [&b](const AngularPoint& q) { return Complex{b(q), 0.0}; };
  const double da_t = d1(ca, p, Axis::Theta, s.h_theta, s.order).real();
  const double db_t = d1(cb, p, Axis::Theta, s.h_theta, s.order).real();
  const double da_p = d1(ca, p, Axis::Phi, s.h_phi, s.order).real();
  const double db_p = d1(cb, p, Axis::Phi, s.h_phi, s.order).real();
  const double sphi = std::sin(p.phi());
  return da_p * db_p + da_t * db_t / (sphi * sphi);
}

double gradient_dot(const Expr& f, const AngularPoint& p) {
  const Jet2 j = eval_jet(f, p);
  const double sphi = std::sin(p.phi());
  return j.d_phi.real() * j.d_phi.imag() +
         j.d_theta.real() * j.d_theta.imag() / (sphi * sphi);
}

double convergence_order(const std::function<Complex(double)>& fd_at_h,
                         Complex exact, const std::vector<double>& h_sequence) {
  if (h_sequence.size() < 3) {
    throw std::invalid_argument("need at least three step sizes");
  }
  for (std::size_t i = 0; i + 1 < h_sequence.size(); ++i) {
    const double ratio = h_sequence[i + 1] / h_sequence[i];
    if (std::fabs(ratio - 0.5) > 0.01) {
      throw std::invalid_argument("step sizes must halve");
    }
  }
  const double floor = 1e-13 * (1.0 + std::abs(exact));
  std::vector<double> log_h, log_e;
  for (double h : h_sequence) {
    const double err = std::abs(fd_at_h(h) - exact);
    if (err <= floor) {
      throw DegenerateSequence("error at the rounding floor; order undefined");
    }
    log_h.push_back(std::log(h));
    log_e.push_back(std::log(err));
  }
  const std::size_t n = log_h.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += log_h[i];
    my += log_e[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (log_h[i] - mx) * (log_e[i] - my);
    sxx += (log_h[i] - mx) * (log_h[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace spherecr
