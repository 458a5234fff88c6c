#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace symframe {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (wrong dimension, non-unimodular
/// matrix, non-multiple conductor, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The symmetry group is not a symmetry group with respect to the dilation,
/// or the requested construction needs an algebraic property the group lacks.
class IncompatibleGroup : public Error {
 public:
  using Error::Error;
};

/// An internal exact verification failed after a construction step.
class VerificationFailure : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. Carries 1-based line and column when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(line ? what + " (line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ")"
                   : what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace symframe
