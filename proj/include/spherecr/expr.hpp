#pragma once

#include <memory>

#include "spherecr/jet.hpp"
#include "spherecr/types.hpp"

namespace spherecr {

/// Immutable expression tree over the closed-form angular functions.
///
/// Leaves are constants, zeta = theta + i*ln tan(phi/2), W = tan(phi/2)*
/// exp(-i*theta) and the family members h(k/m); interior nodes are the
/// algebra operations. Every node caches whether the tree is free of Conj,
/// which is exactly when the function it denotes satisfies D f = 0.
///
/// Expr is a value-semantic handle over shared immutable nodes, so copies
/// are cheap and trees may be shared freely across threads.
class Expr {
 public:
  enum class Kind {
    Const,
    Zeta,
    W,
    Hkm,
    Add,
    Mul,
    Inv,
    Exp,
    Log,
    IntPow,
    Conj,
  };

  static Expr constant(Complex c);
  static Expr zeta();
  static Expr w();
  /// Requires 1 <= |k| <= m - 1 with m >= 2; k = 0 collapses to constant(1).
  static Expr hkm(int k, int m);
  static Expr add(Expr l, Expr r);
  static Expr mul(Expr l, Expr r);
  static Expr inv(Expr x);
  static Expr exp(Expr x);
  static Expr log(Expr x);
  static Expr int_pow(Expr x, int p);
  static Expr conj(Expr x);

  Kind kind() const { return node_->kind; }
  /// False iff the tree contains a Conj node.
  bool holomorphic() const { return node_->holomorphic; }

  Complex constant_value() const { return node_->c; }
  int hkm_k() const { return node_->k; }
  int hkm_m() const { return node_->m; }
  int exponent() const { return node_->p; }
  Expr left() const { return Expr(node_->a); }
  Expr right() const { return Expr(node_->b); }
  Expr child() const { return Expr(node_->a); }

 private:
  struct Node {
    Kind kind = Kind::Const;
    Complex c{};
    int k = 0, m = 0, p = 0;
    std::shared_ptr<const Node> a, b;
    bool holomorphic = true;
  };

  // Hot paths recurse on raw node pointers so that shared trees can be
  // evaluated from many threads without reference-count traffic.
  static Complex eval_node(const Node* n, const AngularPoint& p);
  static Jet2 jet_node(const Node* n, const AngularPoint& p);
  static bool equal_nodes(const Node* a, const Node* b);
  friend Complex eval(const Expr& e, const AngularPoint& p);
  friend Jet2 eval_jet(const Expr& e, const AngularPoint& p);
  friend bool structurally_equal(const Expr& a, const Expr& b);

  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

inline Expr operator+(Expr l, Expr r) { return Expr::add(std::move(l), std::move(r)); }
inline Expr operator*(Expr l, Expr r) { return Expr::mul(std::move(l), std::move(r)); }
inline Expr operator-(Expr x) {
  return Expr::mul(Expr::constant(Complex{-1.0, 0.0}), std::move(x));
}

/// Pointwise value at p. Throws SingularValue when Inv or Log meets an
/// exact zero and DomainError for points outside the cut domain.
Complex eval(const Expr& e, const AngularPoint& p);

/// Value plus exact partials up to second order, by forward jet arithmetic.
Jet2 eval_jet(const Expr& e, const AngularPoint& p);

/// D f = d_theta f + i sin(phi) d_phi f from the exact jet.
Complex symbolic_D(const Expr& e, const AngularPoint& p);

/// Conjugate factor: d_theta f - i sin(phi) d_phi f.
Complex symbolic_Dbar(const Expr& e, const AngularPoint& p);

bool structurally_equal(const Expr& a, const Expr& b);

}  // namespace spherecr
