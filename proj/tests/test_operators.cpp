#include <cmath>

#include "doctest.h"
#include "spherecr/family.hpp"
#include "spherecr/operators.hpp"

using namespace spherecr;

namespace {
const AngularPoint kEquator{0.5 * kPi, 0.5 * kPi};
const StencilSpec kFine{2, 1e-3, 1e-3};
}  // namespace

TEST_CASE("finite-difference D") {
  // D annihilates W up to stencil truncation.
  CHECK(std::abs(apply_D(to_field(Expr::w()), kEquator, kFine)) <= 1e-5);

  // Hand value for conj(W): D conj(W) = 2i conj(W) = -2 here.
  const Complex d = apply_D(to_field(Expr::conj(Expr::w())), kEquator, kFine);
  CHECK(d.real() == doctest::Approx(-2.0).epsilon(1e-5));
  CHECK(std::fabs(d.imag()) < 1e-6);

  // Constants are annihilated exactly.
  CHECK(apply_D(to_field(Expr::constant(Complex{3.0, -1.0})), kEquator,
                kFine) == Complex{0.0, 0.0});
}

TEST_CASE("finite-difference Dbar") {
  // Dbar annihilates conjugates of holomorphic functions.
  CHECK(std::abs(apply_Dbar(to_field(Expr::conj(Expr::w())), kEquator,
                            kFine)) <= 1e-5);

  // Dbar W = -2i W; at this point W = -i, so the value is -2. (The
  // conjugate of D conj(W), consistent with the hand value above.)
  const Complex d = apply_Dbar(to_field(Expr::w()), kEquator, kFine);
  CHECK(d.real() == doctest::Approx(-2.0).epsilon(1e-5));
  CHECK(std::fabs(d.imag()) < 1e-6);

  CHECK(apply_Dbar(to_field(Expr::constant(Complex{1.0, 1.0})), kEquator,
                   kFine) == Complex{0.0, 0.0});
}

TEST_CASE("angular Laplacian by stencil and by jet") {
  // Real part of h(1/2) is harmonic.
  const Expr h12 = Expr::hkm(1, 2);
  ComplexField u12 = [&h12](const AngularPoint& p) {
    return Complex{eval(h12, p).real(), 0.0};
  };
  CHECK(std::abs(angular_laplacian(u12, AngularPoint{2.0, 1.0}, kFine)) <=
        1e-5);

  // |W|^2 = tan^2(phi/2) has Lambda = (1 + t^2)^2, equal to 4 at t = 1.
  const Expr wsq = Expr::mul(Expr::w(), Expr::conj(Expr::w()));
  const Complex fd = angular_laplacian(to_field(wsq), kEquator, kFine);
  CHECK(fd.real() == doctest::Approx(4.0).epsilon(1e-4));
  const Complex exact = angular_laplacian(wsq, kEquator);
  CHECK(exact.real() == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(std::fabs(exact.imag()) < 1e-12);

  CHECK(angular_laplacian(to_field(Expr::constant(Complex{2.0, 0.0})),
                          kEquator, kFine) == Complex{0.0, 0.0});
}

TEST_CASE("factorized Laplacian agrees with the direct form") {
  const Expr wsq = Expr::mul(Expr::w(), Expr::conj(Expr::w()));
  const Complex direct = angular_laplacian(to_field(wsq), kEquator, kFine);
  const Complex fact = factorized_laplacian(to_field(wsq), kEquator, kFine);
  CHECK(fact.real() == doctest::Approx(4.0).epsilon(1e-4));
  CHECK(std::abs(direct - fact) <= 1e-4);

  // Exact-jet routes agree to rounding on a non-holomorphic input.
  const AngularPoint p{2.0, 0.9};
  CHECK(std::abs(angular_laplacian(wsq, p) - factorized_laplacian(wsq, p)) <
        1e-11);

  // Holomorphic inputs are annihilated...
  CHECK(std::abs(factorized_laplacian(Expr::exp(Expr::w()), p)) < 1e-12);
  // ...and so are conjugates of them (Lambda has real coefficients).
  CHECK(std::abs(factorized_laplacian(Expr::conj(Expr::hkm(1, 2)), p)) <
        1e-13);
  CHECK(std::abs(factorized_laplacian(to_field(Expr::conj(Expr::hkm(1, 2))),
                                      p, kFine)) < 1e-5);
}

TEST_CASE("separable 3D Laplacian") {
  const RadialParams rp{1.0};
  auto exp_radial = [&rp](double r) { return radial_solution_jet(rp, r); };
  const Expr one = Expr::constant(Complex{1.0, 0.0});

  // Delta e^{-r} = e^{-r} (1 - 2/r) vanishes at r = 2, matching nu(2) = 0.
  const Point3D q2{2.0, AngularPoint{1.0, 1.0}};
  const Complex lap = laplacian3d_separable(exp_radial, one, q2);
  CHECK(std::abs(lap) < 1e-14);
  CHECK(potential_nu(rp, 2.0) == doctest::Approx(0.0));

  // (-Delta + nu)(e^{-nr} h(1/2)) vanishes to stencil accuracy.
  const Expr h12 = Expr::hkm(1, 2);
  for (double r : {0.5, 1.0, 2.0}) {
    const Point3D q{r, AngularPoint{2.0, 1.2}};
    const Complex l = laplacian3d_separable(exp_radial, to_field(h12), q,
                                            kFine);
    const Complex gh = radial_solution(rp, r) * eval(h12, q.angles());
    CHECK(std::abs(-l + potential_nu(rp, r) * gh) <= 1e-5 * std::abs(gh));
  }

  // Constant times constant has zero Laplacian.
  auto flat = [](double) { return RadialDerivatives{1.0, 0.0, 0.0}; };
  CHECK(std::abs(laplacian3d_separable(flat, one, q2)) == 0.0);
}

TEST_CASE("gradient pairing") {
  const Expr h12 = Expr::hkm(1, 2);
  RealField u = [&h12](const AngularPoint& p) { return eval(h12, p).real(); };
  RealField v = [&h12](const AngularPoint& p) { return eval(h12, p).imag(); };
  const AngularPoint p{2.3, 1.1};
  CHECK(std::fabs(gradient_dot(u, v, p, kFine)) <= 1e-6);
  CHECK(gradient_dot(u, u, p, kFine) > 1e-3);
  RealField c = [](const AngularPoint&) { return 7.5; };
  CHECK(gradient_dot(c, c, p, kFine) == 0.0);

  // Exact pairing between Re and Im from the jet.
  CHECK(std::fabs(gradient_dot(h12, p)) < 1e-14);
}

TEST_CASE("stencils refuse to leave the domain") {
  const StencilSpec wide{2, 0.3, 0.3};
  CHECK_THROWS_AS(apply_D(to_field(Expr::w()), AngularPoint{0.4, 1.0}, wide),
                  DomainError);
  CHECK_THROWS_AS(
      angular_laplacian(to_field(Expr::w()), AngularPoint{3.0, 0.2}, wide),
      DomainError);
  // The nested factorized stencil needs twice the reach.
  CHECK_THROWS_AS(factorized_laplacian(to_field(Expr::w()),
                                       AngularPoint{1.0, 1.0},
                                       StencilSpec{2, 0.3, 0.3}),
                  DomainError);
  CHECK_THROWS_AS(StencilSpec(3, 1e-3, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(StencilSpec(2, 0.0, 1e-3), std::invalid_argument);
}

TEST_CASE("order-4 stencils are more accurate") {
  const Expr cw = Expr::conj(Expr::w());
  const AngularPoint p{2.0, 1.0};
  const Complex exact = symbolic_D(cw, p);
  const double e2 =
      std::abs(apply_D(to_field(cw), p, StencilSpec{2, 1e-2, 1e-2}) - exact);
  const double e4 =
      std::abs(apply_D(to_field(cw), p, StencilSpec{4, 1e-2, 1e-2}) - exact);
  CHECK(e4 < 0.1 * e2);
}

TEST_CASE("convergence order measurement") {
  const Expr cw = Expr::conj(Expr::w());
  const AngularPoint p{2.0, 1.0};
  const std::vector<double> hs{8e-3, 4e-3, 2e-3, 1e-3};

  const double slope_d = convergence_order(
      [&](double h) {
        return apply_D(to_field(cw), p, StencilSpec{2, h, h});
      },
      symbolic_D(cw, p), hs);
  CHECK(slope_d >= 1.8);
  CHECK(slope_d <= 2.2);

  const Expr wsq = Expr::mul(Expr::w(), Expr::conj(Expr::w()));
  const double slope_lap = convergence_order(
      [&](double h) {
        return angular_laplacian(to_field(wsq), p, StencilSpec{2, h, h});
      },
      angular_laplacian(wsq, p), hs);
  CHECK(slope_lap >= 1.8);
  CHECK(slope_lap <= 2.2);

  // D on W: the target is exactly zero but the stencil truncation is a
  // genuine O(h^2) term, so the measured order is still near 2.
  const double slope_w = convergence_order(
      [&](double h) {
        return apply_D(to_field(Expr::w()), p, StencilSpec{2, h, h});
      },
      Complex{0.0, 0.0}, hs);
  CHECK(slope_w >= 1.7);
  CHECK(slope_w <= 2.3);

  // A constant input puts every error on the rounding floor.
  CHECK_THROWS_AS(
      convergence_order(
          [&](double h) {
            return apply_D(to_field(Expr::constant(Complex{1.0, 2.0})), p,
                           StencilSpec{2, h, h});
          },
          Complex{0.0, 0.0}, hs),
      DegenerateSequence);

  CHECK_THROWS_AS(convergence_order([](double) { return Complex{}; },
                                    Complex{}, {1e-2, 5e-3}),
                  std::invalid_argument);
  CHECK_THROWS_AS(convergence_order([](double) { return Complex{}; },
                                    Complex{}, {1e-2, 6e-3, 3e-3}),
                  std::invalid_argument);
}

TEST_CASE("FD operators converge to the exact-jet operators") {
  const Expr e = Expr::mul(Expr::hkm(2, 3), Expr::exp(Expr::w()));
  const AngularPoint p{1.7, 1.3};
  const std::vector<double> hs{8e-3, 4e-3, 2e-3, 1e-3};
  const double s = convergence_order(
      [&](double h) {
        return angular_laplacian(to_field(e), p, StencilSpec{2, h, h});
      },
      angular_laplacian(e, p), hs);
  CHECK(s >= 1.8);
  CHECK(s <= 2.2);
}
