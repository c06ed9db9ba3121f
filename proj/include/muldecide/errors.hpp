#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace muldecide {

/// Bad argument to a library operation (wrong arity, out-of-range modulus, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation undefined on its input, e.g. 0 raised to a non-positive power.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Exact 64-bit arithmetic left its range.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// A rewrite step was requested outside the context that makes it sound
/// (group normalization with a literal 0, a root-of-unity split on a
/// possibly-zero right-hand side, ...).
class ContextError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Formula uses a symbol the chosen structure's language lacks.
class TypeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Formula shape a procedure does not handle (e.g. a universal quantifier
/// where the bounded search expects an existential prefix).
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Case-split or DNF expansion exceeded the configured branch budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace muldecide
