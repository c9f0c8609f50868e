#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace locsys {

/// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes or ring contexts do not match.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A matrix whose determinant is not a unit of the coefficient ring.
class NotAUnit : public Error {
 public:
  using Error::Error;
};

class NotInCongruenceSubgroup : public Error {
 public:
  using Error::Error;
};

/// Coset enumeration produced more cosets than the configured bound.
class IndexOverflow : public Error {
 public:
  IndexOverflow(const std::string& what, std::size_t bound)
      : Error(what), bound_(bound) {}
  std::size_t bound() const noexcept { return bound_; }

 private:
  std::size_t bound_;
};

/// A search ran past its budget. `partial()` is the number of results found
/// before stopping.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t partial)
      : Error(what), partial_(partial) {}
  std::uint64_t partial() const noexcept { return partial_; }

 private:
  std::uint64_t partial_;
};

/// A closure computation grew beyond the caller-supplied bound.
class BoundExceeded : public Error {
 public:
  using Error::Error;
};

/// A naive lift whose relator values are not congruent to Id at the
/// expected level.
class ShapeViolation : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input. `line()` and `column()` are 1-based; zero when
/// not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what), line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace locsys
