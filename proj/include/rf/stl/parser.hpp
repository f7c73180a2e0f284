#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rf/stl/formula.hpp"

namespace rf::stl {

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, UnknownComparator, BadInterval };

  ParseError(Kind kind, int line, int column, std::vector<std::string> expected, const std::string& message);

  Kind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }
  /// Tokens that would have been accepted at the error position (Syntax only).
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  Kind kind_;
  int line_;
  int column_;
  std::vector<std::string> expected_;
};

/// Grammar (whitespace insignificant):
///
///   formula   := or
///   or        := and ('||' and)*
///   and       := until ('&&' until)*
///   until     := unary ('U' interval? until)?
///   unary     := '!' unary | ('G'|'A'|'F'|'E') interval? unary | '(' formula ')' | predicate
///   predicate := expr ('<'|'<='|'>'|'>=') ['-'] number
///   expr      := ['-'] term (('+'|'-') term)*
///   term      := number '*' ident | ident | number
///   interval  := '[' number ',' number ']'        (seconds, 0 <= a <= b)
FormulaPtr parse_formula(std::string_view text);

}  // namespace rf::stl
