#include <cmath>

#include "doctest.h"
#include "spherecr/parser.hpp"
#include "spherecr/verify.hpp"

using namespace spherecr;

TEST_CASE("documented expressions") {
  Rng rng(17);
  const auto pts = random_points(rng, 10, 0.3, 0.4);

  // exp(-i*zeta) is W.
  const Expr e = parse_expr("exp(-i*zeta)");
  CHECK(e.holomorphic());
  for (const auto& p : pts) {
    CHECK(std::abs(eval(e, p) - eval(Expr::w(), p)) <= 1e-12);
  }

  // h(1/2)^2 = t e^{-i theta} = W pointwise.
  const Expr sq = parse_expr("h(1/2)*h(1/2)");
  for (const auto& p : pts) {
    CHECK(std::abs(eval(sq, p) - eval(Expr::w(), p)) <= 1e-12);
  }

  CHECK_THROWS_AS(parse_expr("h(3/2)"), InvalidIndex);
  CHECK_THROWS_AS(parse_expr("h(1/1)"), InvalidIndex);
}

TEST_CASE("grammar structure") {
  // '*' binds tighter than '+'.
  const Expr e = parse_expr("1+2*3");
  REQUIRE(e.kind() == Expr::Kind::Add);
  CHECK(e.left().kind() == Expr::Kind::Const);
  CHECK(e.right().kind() == Expr::Kind::Mul);

  // Division desugars to multiplication by the inverse.
  const Expr d = parse_expr("W/h(1/2)");
  REQUIRE(d.kind() == Expr::Kind::Mul);
  CHECK(d.left().kind() == Expr::Kind::W);
  CHECK(d.right().kind() == Expr::Kind::Inv);

  // Powers.
  const Expr p = parse_expr("W^3");
  REQUIRE(p.kind() == Expr::Kind::IntPow);
  CHECK(p.exponent() == 3);
  CHECK(parse_expr("W^-2").exponent() == -2);

  // Unary minus folds into numbers but wraps other atoms.
  CHECK(parse_expr("-2.5").kind() == Expr::Kind::Const);
  CHECK(parse_expr("-2.5").constant_value() == Complex{-2.5, 0.0});
  const Expr mw = parse_expr("-W^2");
  REQUIRE(mw.kind() == Expr::Kind::Mul);
  CHECK(mw.left().constant_value() == Complex{-1.0, 0.0});
  CHECK(mw.right().kind() == Expr::Kind::IntPow);

  // conj is the one non-holomorphic constructor.
  CHECK_FALSE(parse_expr("conj(W)").holomorphic());
  CHECK(parse_expr("inv(zeta)+log(W)-exp(i)").holomorphic());

  // Whitespace and scientific literals.
  const Expr ws = parse_expr("  1.5e-3 * zeta + .25 ");
  CHECK(ws.kind() == Expr::Kind::Add);
}

TEST_CASE("parse errors carry offsets and expectations") {
  auto offset_of = [](const char* src) -> std::size_t {
    try {
      parse_expr(src);
    } catch (const ParseError& e) {
      CHECK_FALSE(e.expected().empty());
      CHECK(std::string(e.what()).find("offset") != std::string::npos);
      return e.offset();
    }
    FAIL("expected a ParseError for: ", src);
    return SIZE_MAX;
  };
  CHECK(offset_of("2*") == 2);
  CHECK(offset_of("exp(") == 4);
  CHECK(offset_of("(1+2") == 4);
  CHECK(offset_of("@") == 0);
  CHECK(offset_of("h(1:2)") == 3);
  CHECK(offset_of("zeta W") == 5);  // trailing input
  CHECK(offset_of("frob(1)") == 0);
}

namespace {

// Random parser-constructible trees: constants are real literals or the
// bare imaginary unit, exactly what a parse can produce.
Expr random_grammar_tree(Rng& rng, int depth) {
  if (depth <= 0 || rng.uniform() < 0.3) {
    switch (rng.uniform_int(0, 4)) {
      case 0:
        return Expr::w();
      case 1:
        return Expr::zeta();
      case 2: {
        const int m = rng.uniform_int(2, 9);
        int k = rng.uniform_int(1, m - 1);
        if (rng.uniform() < 0.5) k = -k;
        return Expr::hkm(k, m);
      }
      case 3:
        return Expr::constant(Complex{0.0, 1.0});
      default: {
        // Round literals that survive printing exactly (all doubles do via
        // shortest round-trip, including negatives and exponents).
        const double v = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform_int(-8, 8));
        return Expr::constant(Complex{v, 0.0});
      }
    }
  }
  switch (rng.uniform_int(0, 6)) {
    case 0:
      return Expr::add(random_grammar_tree(rng, depth - 1),
                       random_grammar_tree(rng, depth - 1));
    case 1:
      return Expr::mul(random_grammar_tree(rng, depth - 1),
                       random_grammar_tree(rng, depth - 1));
    case 2:
      return Expr::inv(random_grammar_tree(rng, depth - 1));
    case 3:
      return Expr::exp(random_grammar_tree(rng, depth - 1));
    case 4:
      return Expr::log(random_grammar_tree(rng, depth - 1));
    case 5:
      return Expr::conj(random_grammar_tree(rng, depth - 1));
    default: {
      int p = 0;
      do {
        p = rng.uniform_int(-4, 4);
      } while (p == 0 || p == 1);
      return Expr::int_pow(random_grammar_tree(rng, depth - 1), p);
    }
  }
}

}  // namespace

TEST_CASE("round trip over generated expressions") {
  Rng rng(0x5EED);
  for (int i = 0; i < 1000; ++i) {
    const Expr e = random_grammar_tree(rng, 5);
    const std::string src = to_source(e);
    CAPTURE(src);
    const Expr reparsed = parse_expr(src);
    CHECK(structurally_equal(e, reparsed));
    // And printing is a fixed point.
    CHECK(to_source(reparsed) == src);
  }
}

TEST_CASE("round trip through parse") {
  for (const char* src :
       {"exp(-i*zeta)", "h(1/2)*h(1/2)", "(W+zeta)^3", "1-2/W",
        "conj(W)*inv(h(-2/5))", "-1", "-W", "1.25e-7+i*3"}) {
    const Expr e = parse_expr(src);
    const Expr again = parse_expr(to_source(e));
    CHECK(structurally_equal(e, again));
  }
}

TEST_CASE("general complex constants print as arithmetic") {
  const Expr c = Expr::constant(Complex{2.0, -3.5});
  const Expr reparsed = parse_expr(to_source(c));
  const AngularPoint p{1.0, 1.0};
  CHECK(std::abs(eval(reparsed, p) - Complex{2.0, -3.5}) < 1e-15);
}
