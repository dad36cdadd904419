#include <cmath>

#include "doctest.h"
#include "spherecr/family.hpp"
#include "spherecr/verify.hpp"

using namespace spherecr;

TEST_CASE("potential") {
  const RadialParams n1{1.0};
  CHECK(potential_nu(n1, 2.0) == doctest::Approx(0.0));
  CHECK(potential_nu(n1, 1.0) == doctest::Approx(-1.0));
  CHECK(potential_nu(RadialParams{2.0}, 1e9) == doctest::Approx(4.0));
  CHECK_THROWS_AS(potential_nu(n1, 0.0), DomainError);
  CHECK_THROWS_AS(potential_nu(n1, -1.0), DomainError);
  CHECK_THROWS_AS(RadialParams{0.0}, DomainError);
}

TEST_CASE("radial solution and its ODE") {
  const RadialParams n1{1.0};
  CHECK(radial_solution(n1, 0.0) == 1.0);
  CHECK(radial_solution(n1, 1.0) == doctest::Approx(std::exp(-1.0)));
  // g'' + (2/r) g' - nu g = 0 with exact derivatives.
  for (double r : {0.5, 1.0, 3.0}) {
    const RadialDerivatives d = radial_solution_jet(n1, r);
    const double resid =
        d.d2 + 2.0 / r * d.d1 - potential_nu(n1, r) * d.value;
    CHECK(std::fabs(resid) <= 1e-12);
  }
}

TEST_CASE("family index constraints") {
  CHECK_NOTHROW(FamilyIndex(1, 2));
  CHECK_NOTHROW(FamilyIndex(-3, 4));
  CHECK_THROWS_AS(FamilyIndex(3, 2), InvalidIndex);
  CHECK_THROWS_AS(FamilyIndex(0, 4), InvalidIndex);  // use zero_limit
  CHECK_THROWS_AS(FamilyIndex(1, 1), InvalidIndex);
  CHECK_THROWS_AS(FamilyIndex::zero_limit(1), InvalidIndex);
  CHECK(FamilyIndex::zero_limit(3).k() == 0);
}

TEST_CASE("family member expression") {
  const Expr h = h_km(FamilyIndex{1, 2});
  const Complex v = eval(h, AngularPoint{kPi, 0.5 * kPi});
  CHECK(std::fabs(v.real()) < 1e-15);
  CHECK(v.imag() == doctest::Approx(-1.0));

  Rng rng(31);
  const auto pts = random_points(rng, 25, 0.3, 0.5);
  for (const auto& p : pts) {
    CHECK(std::abs(symbolic_D(h_km(FamilyIndex{2, 3}), p)) <= 1e-12);
  }
  CHECK_THROWS_AS(h_km(FamilyIndex(3, 2)), InvalidIndex);

  // The limit member is the constant 1.
  const Expr h0 = h_km(FamilyIndex::zero_limit(4));
  CHECK(h0.kind() == Expr::Kind::Const);
  CHECK(eval(h0, pts[0]) == Complex{1.0, 0.0});
}

TEST_CASE("closed-form phi integral") {
  CHECK(phi_integral_closed_form(FamilyIndex{1, 2}) == doctest::Approx(kPi));
  CHECK(phi_integral_closed_form(FamilyIndex::zero_limit(5)) == 2.0);
  // Even in k.
  CHECK(phi_integral_closed_form(FamilyIndex{-1, 2}) ==
        doctest::Approx(kPi).epsilon(1e-15));
  CHECK(phi_integral_closed_form(FamilyIndex{-4, 9}) ==
        doctest::Approx(phi_integral_closed_form(FamilyIndex{4, 9}))
            .epsilon(1e-15));
  // sin(5 pi/6) = 1/2 gives 10 pi / 3.
  CHECK(phi_integral_closed_form(FamilyIndex{5, 6}) ==
        doctest::Approx(10.0 * kPi / 3.0).epsilon(1e-15));
}

TEST_CASE("normalization constant") {
  const RadialParams n1{1.0};
  CHECK(normalization_constant(n1, FamilyIndex{1, 2}) ==
        doctest::Approx(std::sqrt(2.0) / kPi).epsilon(1e-15));
  CHECK(normalization_constant(n1, FamilyIndex::zero_limit(2)) ==
        doctest::Approx(std::sqrt(1.0 / kPi)).epsilon(1e-15));
  // n^(3/2) scaling.
  CHECK(normalization_constant(RadialParams{4.0}, FamilyIndex{1, 2}) ==
        doctest::Approx(8.0 * std::sqrt(2.0) / kPi).epsilon(1e-15));
}

TEST_CASE("normalized mode evaluation") {
  const NormalizedMode mode = g_km(RadialParams{1.0}, FamilyIndex{1, 2});
  // At r = 0, theta = pi, phi = pi/2 the angular factor is -i.
  const Complex v = mode.eval_closed(0.0, AngularPoint{kPi, 0.5 * kPi});
  CHECK(std::fabs(v.real()) < 1e-15);
  CHECK(v.imag() == doctest::Approx(-std::sqrt(2.0) / kPi).epsilon(1e-14));

  // |g| does not depend on theta.
  const double m1 =
      std::abs(mode(Point3D{1.5, AngularPoint{0.25 * kPi, 1.0}}));
  const double m2 =
      std::abs(mode(Point3D{1.5, AngularPoint{0.75 * kPi, 1.0}}));
  CHECK(m1 == doctest::Approx(m2).epsilon(1e-14));

  // Decay envelope in r.
  const AngularPoint p{1.0, 1.0};
  CHECK(std::abs(mode(Point3D{30.0, p})) <
        1e-10 * std::abs(mode(Point3D{1.0, p})));
  CHECK_THROWS_AS(mode.eval_closed(-1.0, p), DomainError);
}

TEST_CASE("both mode construction routes agree") {
  Rng rng(0xFEED);
  for (int m = 2; m <= 8; ++m) {
    for (int k : {1, m - 1, -(m - 1)}) {
      if (std::abs(k) > m - 1 || k == 0) continue;
      const NormalizedMode mode = g_km(RadialParams{1.3}, FamilyIndex{k, m});
      const auto pts = random_points(rng, 40, 0.2, 0.2);
      for (const auto& p : pts) {
        const double r = 4.0 * rng.uniform() + 1e-3;
        const Complex a = mode.eval_closed(r, p);
        const Complex b = mode.eval_composed(r, p);
        CHECK(std::abs(a - b) <= 1e-13 * (1.0 + std::abs(a)));
      }
    }
  }
}
