#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "spherecr/expr.hpp"

namespace spherecr {

/// Syntax error with the byte offset of the offending token and the set of
/// tokens that would have been accepted there.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset,
             std::vector<std::string> expected);

  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

// Grammar (whitespace insignificant):
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := '-' factor | atom ('^' integer)?
//   atom   := 'zeta' | 'W' | 'h(' integer '/' integer ')' | 'i' | number
//           | 'exp(' expr ')' | 'log(' expr ')' | 'inv(' expr ')'
//           | 'conj(' expr ')' | '(' expr ')'
// Division desugars to Mul(l, Inv(r)), subtraction to Add(l, -r); a unary
// minus in front of a number literal folds into the constant.
Expr parse_expr(std::string_view src);

/// Grammar text that reparses to a structurally identical tree for any tree
/// the parser can produce. Constants that cannot appear in a parse (general
/// complex values) print as an arithmetic sum, which reparses to the
/// equivalent Add/Mul tree instead.
std::string to_source(const Expr& e);

}  // namespace spherecr
