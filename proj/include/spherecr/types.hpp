#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace spherecr {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// A point (or a stencil around it) left the cut domain
/// theta in (0, 2*pi), phi in (0, pi), r > 0.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Inv or Log applied to an exact zero.
class SingularValue : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (k, m) outside 1 <= |k| <= m - 1 with m >= 2.
class InvalidIndex : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Order fit attempted on an error sequence at the rounding floor.
class DegenerateSequence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Angular coordinates on the cut sphere. The half-plane theta = 0 and the
/// poles phi in {0, pi} are excluded; constructors enforce this.
class AngularPoint {
 public:
  AngularPoint(double theta, double phi) : theta_(theta), phi_(phi) {
    if (!(theta > 0.0 && theta < kTwoPi)) {
      throw DomainError("theta = " + std::to_string(theta) +
                        " outside the cut domain (0, 2*pi)");
    }
    if (!(phi > 0.0 && phi < kPi)) {
      throw DomainError("phi = " + std::to_string(phi) +
                        " outside the open interval (0, pi)");
    }
  }

  double theta() const { return theta_; }
  double phi() const { return phi_; }

 private:
  double theta_;
  double phi_;
};

/// Spherical point with positive radius.
class Point3D {
 public:
  Point3D(double r, AngularPoint angles) : r_(r), angles_(angles) {
    if (!(r > 0.0)) {
      throw DomainError("r = " + std::to_string(r) + " must be positive");
    }
  }

  double r() const { return r_; }
  const AngularPoint& angles() const { return angles_; }
  double theta() const { return angles_.theta(); }
  double phi() const { return angles_.phi(); }

 private:
  double r_;
  AngularPoint angles_;
};

/// Value and first two derivatives of a radial profile at one radius.
struct RadialDerivatives {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

}  // namespace spherecr
