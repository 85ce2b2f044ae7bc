#ifndef QGREEN_EXPR_HPP
#define QGREEN_EXPR_HPP

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qgreen/errors.hpp"

namespace qgreen {

/// Arithmetic expression tree for user-supplied h(t), f(t,x), y(ell) and
/// measure densities.  Immutable and shareable once parsed.
struct Expr {
  enum class Kind { Number, Var, Neg, Binary, Call };

  Kind kind = Kind::Number;
  double number = 0.0;
  std::string name;  // variable or function name
  char op = 0;       // one of + - * / ^
  std::vector<std::shared_ptr<const Expr>> args;
};

using ExprPtr = std::shared_ptr<const Expr>;

// Standard precedence: ^ (right-assoc) over unary minus over * / over + -.
// Throws ParseError / UnknownIdentifier.
ExprPtr parse(std::string_view src);

using Bindings = std::map<std::string, double>;

// Throws EvalDomainError on domain faults (ln of nonpositive, fractional power
// of a negative base, nonfinite result), UnboundVariable for free variables.
double eval(const Expr& e, const Bindings& bindings);

// Parenthesized textual form; parse(unparse(e)) is structurally equal to e.
std::string unparse(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

// Verifies that every variable mentioned belongs to `allowed`.
void check_variables(const Expr& e, const std::set<std::string>& allowed);

}  // namespace qgreen

#endif
