#include "spherecr/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace spherecr {

namespace {

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += i + 1 == xs.size() ? " or " : ", ";
    out += xs[i];
  }
  return out;
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t offset,
                       std::vector<std::string> expected)
    : std::runtime_error(message + " at offset " + std::to_string(offset) +
                         (expected.empty() ? "" : "; expected " + join(expected))),
      offset_(offset),
      expected_(std::move(expected)) {}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr parse() {
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != src_.size()) {
      throw ParseError("unexpected trailing input", pos_,
                       {"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"});
    }
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!eat(c)) {
      throw ParseError("missing token", pos_, {what});
    }
  }

  Expr parse_sum() {
    Expr e = parse_term();
    while (true) {
      if (eat('+')) {
        e = Expr::add(std::move(e), parse_term());
      } else if (eat('-')) {
        e = Expr::add(std::move(e),
                      Expr::mul(Expr::constant(Complex{-1.0, 0.0}), parse_term()));
      } else {
        return e;
      }
    }
  }

  Expr parse_term() {
    Expr e = parse_factor();
    while (true) {
      if (eat('*')) {
        e = Expr::mul(std::move(e), parse_factor());
      } else if (eat('/')) {
        e = Expr::mul(std::move(e), Expr::inv(parse_factor()));
      } else {
        return e;
      }
    }
  }

  Expr parse_factor() {
    skip_ws();
    if (eat('-')) {
      // A minus in front of a bare number folds into the constant.
      skip_ws();
      if (pos_ < src_.size() &&
          (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
           src_[pos_] == '.')) {
        const double v = parse_number();
        return maybe_power(Expr::constant(Complex{-v, 0.0}));
      }
      return Expr::mul(Expr::constant(Complex{-1.0, 0.0}), parse_factor());
    }
    return maybe_power(parse_atom());
  }

  Expr maybe_power(Expr base) {
    if (eat('^')) {
      return Expr::int_pow(std::move(base), parse_integer("integer exponent"));
    }
    return base;
  }

  int parse_integer(const char* what) {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ < src_.size() && src_[pos_] == '-') ++pos_;
    while (pos_ < src_.size() &&
           std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
    int value = 0;
    const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (res.ec != std::errc{} || res.ptr != src_.data() + pos_ || pos_ == start) {
      throw ParseError("malformed integer", start, {what});
    }
    return value;
  }

  double parse_number() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
      }
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() &&
          std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() &&
               std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          ++pos_;
        }
      } else {
        pos_ = mark;  // the 'e' was not an exponent
      }
    }
    double value = 0.0;
    const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (res.ec != std::errc{} || res.ptr != src_.data() + pos_ || pos_ == start) {
      throw ParseError("malformed number", start, {"number"});
    }
    return value;
  }

  bool match_ident(std::string_view word) {
    skip_ws();
    if (src_.substr(pos_).substr(0, word.size()) != word) return false;
    const std::size_t after = pos_ + word.size();
    if (after < src_.size() &&
        (std::isalnum(static_cast<unsigned char>(src_[after])) ||
         src_[after] == '_')) {
      return false;  // longer identifier
    }
    pos_ = after;
    return true;
  }

  Expr parse_atom() {
    skip_ws();
    const std::size_t at = pos_;
    if (pos_ >= src_.size()) {
      throw ParseError("unexpected end of input", at, atom_expectations());
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return Expr::constant(Complex{parse_number(), 0.0});
    }
    if (eat('(')) {
      Expr e = parse_sum();
      expect(')', "')'");
      return e;
    }
    if (match_ident("zeta")) return Expr::zeta();
    if (match_ident("W")) return Expr::w();
    if (match_ident("i")) return Expr::constant(Complex{0.0, 1.0});
    if (match_ident("exp")) return parse_call(&Expr::exp);
    if (match_ident("log")) return parse_call(&Expr::log);
    if (match_ident("inv")) return parse_call(&Expr::inv);
    if (match_ident("conj")) return parse_call(&Expr::conj);
    if (match_ident("h")) {
      expect('(', "'('");
      const int k = parse_integer("integer k");
      expect('/', "'/'");
      const int m = parse_integer("integer m");
      expect(')', "')'");
      return Expr::hkm(k, m);  // throws InvalidIndex outside the constraint
    }
    throw ParseError("unexpected token", at, atom_expectations());
  }

  Expr parse_call(Expr (*make)(Expr)) {
    expect('(', "'('");
    Expr inner = parse_sum();
    expect(')', "')'");
    return make(std::move(inner));
  }

  static std::vector<std::string> atom_expectations() {
    return {"number", "'i'",    "'zeta'",  "'W'",    "'h('",
            "'exp('", "'log('", "'inv('",  "'conj('", "'('"};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

bool atomic_for_power(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Zeta:
    case Expr::Kind::W:
    case Expr::Kind::Hkm:
    case Expr::Kind::Inv:
    case Expr::Kind::Exp:
    case Expr::Kind::Log:
    case Expr::Kind::Conj:
      return true;
    case Expr::Kind::Const: {
      const Complex c = e.constant_value();
      return (c.imag() == 0.0 && !std::signbit(c.real())) ||
             (c.real() == 0.0 && c.imag() == 1.0);
    }
    default:
      return false;
  }
}

}  // namespace

Expr parse_expr(std::string_view src) { return Parser(src).parse(); }

std::string to_source(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Const: {
      const Complex c = e.constant_value();
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw std::invalid_argument("non-finite constant has no source form");
      }
      if (c.imag() == 0.0) return format_double(c.real());
      if (c.real() == 0.0 && c.imag() == 1.0) return "i";
      return "(" + format_double(c.real()) + "+" + format_double(c.imag()) +
             "*i)";
    }
    case Expr::Kind::Zeta:
      return "zeta";
    case Expr::Kind::W:
      return "W";
    case Expr::Kind::Hkm: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "h(%d/%d)", e.hkm_k(), e.hkm_m());
      return buf;
    }
    case Expr::Kind::Add:
      return "(" + to_source(e.left()) + "+" + to_source(e.right()) + ")";
    case Expr::Kind::Mul:
      return "(" + to_source(e.left()) + "*" + to_source(e.right()) + ")";
    case Expr::Kind::Inv:
      return "inv(" + to_source(e.child()) + ")";
    case Expr::Kind::Exp:
      return "exp(" + to_source(e.child()) + ")";
    case Expr::Kind::Log:
      return "log(" + to_source(e.child()) + ")";
    case Expr::Kind::IntPow: {
      const Expr base = e.child();
      const std::string b = atomic_for_power(base) ? to_source(base)
                                                   : "(" + to_source(base) + ")";
      return b + "^" + std::to_string(e.exponent());
    }
    case Expr::Kind::Conj:
      return "conj(" + to_source(e.child()) + ")";
  }
  throw std::logic_error("unreachable expression kind");
}

}  // namespace spherecr
