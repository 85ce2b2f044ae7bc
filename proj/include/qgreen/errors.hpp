#ifndef QGREEN_ERRORS_HPP
#define QGREEN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qgreen {

// Argument outside the mathematical domain of an operation.
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// An infinite sum or product hit its term cap before reaching the tolerance.
struct TruncationNotConverged : std::runtime_error {
  explicit TruncationNotConverged(const std::string& what) : std::runtime_error(what) {}
};

// A structural hypothesis on the problem data does not hold (e.g. rho <= 0).
struct HypothesisViolation : std::runtime_error {
  explicit HypothesisViolation(const std::string& what) : std::runtime_error(what) {}
};

// Negative values fed to an operator that requires a nonnegative input.
struct NegativeInput : std::runtime_error {
  explicit NegativeInput(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent configuration; carries the offending field path.
struct ConfigError : std::runtime_error {
  std::string field;
  ConfigError(std::string field_path, const std::string& what)
      : std::runtime_error(field_path.empty() ? what : field_path + ": " + what),
        field(std::move(field_path)) {}
};

// Expression language errors.
struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(std::size_t pos, const std::string& what)
      : std::runtime_error(what + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
};

struct UnknownIdentifier : std::runtime_error {
  explicit UnknownIdentifier(const std::string& name)
      : std::runtime_error("unknown identifier '" + name + "'") {}
};

struct EvalDomainError : std::runtime_error {
  explicit EvalDomainError(const std::string& what) : std::runtime_error(what) {}
};

struct UnboundVariable : std::runtime_error {
  explicit UnboundVariable(const std::string& name)
      : std::runtime_error("unbound variable '" + name + "'") {}
};

}  // namespace qgreen

#endif
