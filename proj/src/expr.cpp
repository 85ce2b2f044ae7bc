#include "qgreen/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace qgreen {

namespace {

const std::set<std::string> kFunctions1{"ln", "exp", "sqrt", "abs"};
const std::set<std::string> kFunctions2{"pow", "min", "max"};

ExprPtr make_number(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Number;
  e->number = v;
  return e;
}

ExprPtr make_var(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Var;
  e->name = std::move(name);
  return e;
}

ExprPtr make_neg(ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Neg;
  e->args = {std::move(a)};
  return e;
}

ExprPtr make_binary(char op, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Binary;
  e->op = op;
  e->args = {std::move(a), std::move(b)};
  return e;
}

ExprPtr make_call(std::string name, std::vector<ExprPtr> args) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Call;
  e->name = std::move(name);
  e->args = std::move(args);
  return e;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  ExprPtr run() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError(0, "empty expression");
    ExprPtr e = parse_sum();
    skip_ws();
    if (pos_ < src_.size())
      throw ParseError(pos_, std::string("unexpected character '") + src_[pos_] +
                                 "', expected operator or end of input");
    return e;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool peek_is(char c) {
    skip_ws();
    return pos_ < src_.size() && src_[pos_] == c;
  }

  bool consume(char c) {
    if (peek_is(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!consume(c)) throw ParseError(pos_, std::string("expected ") + what);
  }

  ExprPtr parse_sum() {
    ExprPtr left = parse_term();
    for (;;) {
      if (consume('+'))
        left = make_binary('+', left, parse_term());
      else if (consume('-'))
        left = make_binary('-', left, parse_term());
      else
        return left;
    }
  }

  ExprPtr parse_term() {
    ExprPtr left = parse_unary();
    for (;;) {
      if (consume('*'))
        left = make_binary('*', left, parse_unary());
      else if (consume('/'))
        left = make_binary('/', left, parse_unary());
      else
        return left;
    }
  }

  // Unary minus binds looser than ^, so -2^2 parses as -(2^2).
  ExprPtr parse_unary() {
    if (consume('-')) return make_neg(parse_unary());
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    if (consume('^')) return make_binary('^', base, parse_unary());
    return base;
  }

  ExprPtr parse_atom() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError(pos_, "expected number, name or '('");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr inner = parse_sum();
      expect(')', "')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_name();
    throw ParseError(pos_, std::string("unexpected character '") + c +
                               "', expected number, name or '('");
  }

  ExprPtr parse_number() {
    const char* begin = src_.data() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) throw ParseError(pos_, "malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    return make_number(v);
  }

  ExprPtr parse_name() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    std::string name(src_.substr(start, pos_ - start));
    if (peek_is('(')) {
      ++pos_;
      std::vector<ExprPtr> args;
      args.push_back(parse_sum());
      while (consume(',')) args.push_back(parse_sum());
      expect(')', "')' after function arguments");
      const std::size_t want = kFunctions1.count(name) ? 1 : kFunctions2.count(name) ? 2 : 0;
      if (want == 0) throw UnknownIdentifier(name);
      if (args.size() != want)
        throw ParseError(start, "function '" + name + "' takes " + std::to_string(want) +
                                    " argument(s)");
      return make_call(std::move(name), std::move(args));
    }
    if (name == "pi") return make_number(M_PI);
    if (name == "e") return make_number(M_E);
    return make_var(std::move(name));
  }
};

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw EvalDomainError(std::string(what) + " produced a nonfinite value");
  return v;
}

double eval_pow(double base, double exponent) {
  if (base < 0.0) {
    if (std::abs(exponent - std::round(exponent)) > 1e-9)
      throw EvalDomainError("fractional power of a negative base");
    return checked(std::pow(base, std::round(exponent)), "power");
  }
  if (base == 0.0 && exponent < 0.0) throw EvalDomainError("zero raised to a negative power");
  return checked(std::pow(base, exponent), "power");
}

}  // namespace

ExprPtr parse(std::string_view src) { return Parser(src).run(); }

double eval(const Expr& e, const Bindings& bindings) {
  switch (e.kind) {
    case Expr::Kind::Number:
      return e.number;
    case Expr::Kind::Var: {
      auto it = bindings.find(e.name);
      if (it == bindings.end()) throw UnboundVariable(e.name);
      return it->second;
    }
    case Expr::Kind::Neg:
      return -eval(*e.args[0], bindings);
    case Expr::Kind::Binary: {
      const double a = eval(*e.args[0], bindings);
      const double b = eval(*e.args[1], bindings);
      switch (e.op) {
        case '+': return checked(a + b, "addition");
        case '-': return checked(a - b, "subtraction");
        case '*': return checked(a * b, "multiplication");
        case '/':
          if (b == 0.0) throw EvalDomainError("division by zero");
          return checked(a / b, "division");
        case '^': return eval_pow(a, b);
      }
      throw EvalDomainError("corrupt expression node");
    }
    case Expr::Kind::Call: {
      const double a = eval(*e.args[0], bindings);
      if (e.name == "ln") {
        if (a <= 0.0) throw EvalDomainError("ln of a nonpositive value");
        return checked(std::log(a), "ln");
      }
      if (e.name == "exp") return checked(std::exp(a), "exp");
      if (e.name == "sqrt") {
        if (a < 0.0) throw EvalDomainError("sqrt of a negative value");
        return std::sqrt(a);
      }
      if (e.name == "abs") return std::abs(a);
      const double b = eval(*e.args[1], bindings);
      if (e.name == "pow") return eval_pow(a, b);
      if (e.name == "min") return std::min(a, b);
      if (e.name == "max") return std::max(a, b);
      throw EvalDomainError("corrupt expression node");
    }
  }
  throw EvalDomainError("corrupt expression node");
}

std::string unparse(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Number: {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", e.number);
      return buf;
    }
    case Expr::Kind::Var:
      return e.name;
    case Expr::Kind::Neg:
      return "(-" + unparse(*e.args[0]) + ")";
    case Expr::Kind::Binary:
      return "(" + unparse(*e.args[0]) + e.op + unparse(*e.args[1]) + ")";
    case Expr::Kind::Call: {
      std::string out = e.name + "(" + unparse(*e.args[0]);
      for (std::size_t i = 1; i < e.args.size(); ++i) out += "," + unparse(*e.args[i]);
      return out + ")";
    }
  }
  return {};
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  switch (a.kind) {
    case Expr::Kind::Number:
      if (a.number != b.number) return false;
      break;
    case Expr::Kind::Var:
    case Expr::Kind::Call:
      if (a.name != b.name) return false;
      break;
    case Expr::Kind::Binary:
      if (a.op != b.op) return false;
      break;
    case Expr::Kind::Neg:
      break;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!structurally_equal(*a.args[i], *b.args[i])) return false;
  return true;
}

void check_variables(const Expr& e, const std::set<std::string>& allowed) {
  if (e.kind == Expr::Kind::Var && !allowed.count(e.name)) throw UnknownIdentifier(e.name);
  for (const auto& arg : e.args) check_variables(*arg, allowed);
}

}  // namespace qgreen
