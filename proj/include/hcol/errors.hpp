#pragma once

#include <stdexcept>
#include <string>

namespace hcol {

/// Base of every error raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid model parameters (k < 3, n < k, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// The requested object does not exist (m > C(n,k), no admissible planted colouring).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed a configured size or retry budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A series or closed form evaluated outside its region of convergence.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; the message carries the offending line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Internal consistency check failed. Always a bug.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace hcol
