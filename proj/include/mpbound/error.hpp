#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mpbound {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands with incompatible shapes or fields.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A matrix that had to be invertible was not.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// A precondition of a construction does not hold (e.g. k too large for the field).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A witness search exhausted its budget without finding a nonzero point.
class NotFound : public Error {
 public:
  NotFound(const std::string& what, std::size_t evaluations)
      : Error(what + " (evaluations used: " + std::to_string(evaluations) + ")"),
        evaluations_(evaluations) {}

  std::size_t evaluations() const noexcept { return evaluations_; }

 private:
  std::size_t evaluations_;
};

/// Malformed text input; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace mpbound
