#include "spherecr/expr.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace spherecr {

namespace {

Complex complex_int_pow(Complex z, int p) {
  if (p == 0) return Complex{1.0, 0.0};
  if (p < 0) {
    if (z == Complex{0.0, 0.0}) throw SingularValue("0 raised to a negative power");
    return 1.0 / complex_int_pow(z, -p);
  }
  Complex acc{1.0, 0.0};
  while (p > 0) {
    if (p & 1) acc *= z;
    p >>= 1;
    if (p) z *= z;
  }
  return acc;
}

void validate_hkm_index(int k, int m) {
  if (m < 2) {
    throw InvalidIndex("h(k/m) requires m >= 2, got m = " + std::to_string(m));
  }
  if (std::abs(k) > m - 1) {
    throw InvalidIndex("h(k/m) requires |k| <= m - 1, got k = " +
                       std::to_string(k) + ", m = " + std::to_string(m));
  }
}

}  // namespace

Expr Expr::constant(Complex c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->c = c;
  return Expr(std::move(n));
}

Expr Expr::zeta() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Zeta;
  return Expr(std::move(n));
}

Expr Expr::w() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::W;
  return Expr(std::move(n));
}

Expr Expr::hkm(int k, int m) {
  validate_hkm_index(k, m);
  if (k == 0) return constant(Complex{1.0, 0.0});  // h(0/m) is identically 1
  auto n = std::make_shared<Node>();
  n->kind = Kind::Hkm;
  n->k = k;
  n->m = m;
  return Expr(std::move(n));
}

Expr Expr::add(Expr l, Expr r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Add;
  n->holomorphic = l.holomorphic() && r.holomorphic();
  n->a = std::move(l.node_);
  n->b = std::move(r.node_);
  return Expr(std::move(n));
}

Expr Expr::mul(Expr l, Expr r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Mul;
  n->holomorphic = l.holomorphic() && r.holomorphic();
  n->a = std::move(l.node_);
  n->b = std::move(r.node_);
  return Expr(std::move(n));
}

Expr Expr::inv(Expr x) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Inv;
  n->holomorphic = x.holomorphic();
  n->a = std::move(x.node_);
  return Expr(std::move(n));
}

Expr Expr::exp(Expr x) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Exp;
  n->holomorphic = x.holomorphic();
  n->a = std::move(x.node_);
  return Expr(std::move(n));
}

Expr Expr::log(Expr x) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Log;
  n->holomorphic = x.holomorphic();
  n->a = std::move(x.node_);
  return Expr(std::move(n));
}

Expr Expr::int_pow(Expr x, int p) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::IntPow;
  n->holomorphic = x.holomorphic();
  n->p = p;
  n->a = std::move(x.node_);
  return Expr(std::move(n));
}

Expr Expr::conj(Expr x) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Conj;
  n->holomorphic = false;
  n->a = std::move(x.node_);
  return Expr(std::move(n));
}

Complex Expr::eval_node(const Node* n, const AngularPoint& p) {
  switch (n->kind) {
    case Kind::Const:
      return n->c;
    case Kind::Zeta:
      return Complex{p.theta(), std::log(std::tan(0.5 * p.phi()))};
    case Kind::W: {
      const double t = std::tan(0.5 * p.phi());
      return t * Complex{std::cos(p.theta()), -std::sin(p.theta())};
    }
    case Kind::Hkm: {
      const double alpha =
          static_cast<double>(n->k) / static_cast<double>(n->m);
      const double amp = std::pow(std::tan(0.5 * p.phi()), alpha);
      return amp * Complex{std::cos(alpha * p.theta()),
                           -std::sin(alpha * p.theta())};
    }
    case Kind::Add:
      return eval_node(n->a.get(), p) + eval_node(n->b.get(), p);
    case Kind::Mul:
      return eval_node(n->a.get(), p) * eval_node(n->b.get(), p);
    case Kind::Inv: {
      const Complex v = eval_node(n->a.get(), p);
      if (v == Complex{0.0, 0.0}) throw SingularValue("inverse of zero");
      return 1.0 / v;
    }
    case Kind::Exp:
      return std::exp(eval_node(n->a.get(), p));
    case Kind::Log: {
      const Complex v = eval_node(n->a.get(), p);
      if (v == Complex{0.0, 0.0}) throw SingularValue("log of zero");
      return std::log(v);
    }
    case Kind::IntPow:
      return complex_int_pow(eval_node(n->a.get(), p), n->p);
    case Kind::Conj:
      return std::conj(eval_node(n->a.get(), p));
  }
  throw std::logic_error("unreachable expression kind");
}

Complex eval(const Expr& e, const AngularPoint& p) {
  return Expr::eval_node(e.node_.get(), p);
}

Jet2 Expr::jet_node(const Node* n, const AngularPoint& p) {
  switch (n->kind) {
    case Kind::Const:
      return jet_constant(n->c);
    case Kind::Zeta:
      return jet_zeta(p);
    case Kind::W:
      return jet_w(p);
    case Kind::Hkm:
      return jet_hkm(n->k, n->m, p);
    case Kind::Add:
      return jet_add(jet_node(n->a.get(), p), jet_node(n->b.get(), p));
    case Kind::Mul:
      return jet_mul(jet_node(n->a.get(), p), jet_node(n->b.get(), p));
    case Kind::Inv:
      return jet_inv(jet_node(n->a.get(), p));
    case Kind::Exp:
      return jet_exp(jet_node(n->a.get(), p));
    case Kind::Log:
      return jet_log(jet_node(n->a.get(), p));
    case Kind::IntPow:
      return jet_int_pow(jet_node(n->a.get(), p), n->p);
    case Kind::Conj:
      return jet_conj(jet_node(n->a.get(), p));
  }
  throw std::logic_error("unreachable expression kind");
}

Jet2 eval_jet(const Expr& e, const AngularPoint& p) {
  return Expr::jet_node(e.node_.get(), p);
}

Complex symbolic_D(const Expr& e, const AngularPoint& p) {
  const Jet2 j = eval_jet(e, p);
  return j.d_theta + Complex{0.0, std::sin(p.phi())} * j.d_phi;
}

Complex symbolic_Dbar(const Expr& e, const AngularPoint& p) {
  const Jet2 j = eval_jet(e, p);
  return j.d_theta - Complex{0.0, std::sin(p.phi())} * j.d_phi;
}

bool Expr::equal_nodes(const Node* a, const Node* b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Kind::Const:
      return a->c == b->c;
    case Kind::Zeta:
    case Kind::W:
      return true;
    case Kind::Hkm:
      return a->k == b->k && a->m == b->m;
    case Kind::Add:
    case Kind::Mul:
      return equal_nodes(a->a.get(), b->a.get()) &&
             equal_nodes(a->b.get(), b->b.get());
    case Kind::IntPow:
      return a->p == b->p && equal_nodes(a->a.get(), b->a.get());
    case Kind::Inv:
    case Kind::Exp:
    case Kind::Log:
    case Kind::Conj:
      return equal_nodes(a->a.get(), b->a.get());
  }
  return false;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  return Expr::equal_nodes(a.node_.get(), b.node_.get());
}

}  // namespace spherecr
