#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace krymat {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values or overflow in a kernel.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// The algebraic problem has no unique solution (e.g. singular Lyapunov operator).
class IllPosedError : public Error {
 public:
  using Error::Error;
};

/// Sparse factorization of a singular or structurally deficient matrix.
class FactorizationError : public Error {
 public:
  using Error::Error;
};

/// A requested feature or parameter value is outside what is implemented.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Dense work was requested on an operand larger than the configured cap.
class CapExceededError : public Error {
 public:
  using Error::Error;
};

/// An implicit time step could not be taken.
class StepFailure : public Error {
 public:
  using Error::Error;
};

/// Invalid argument value (zero seed, bad grid, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. Carries the 1-based line number of the offending line.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// File system failures (missing files, unwritable directories).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace krymat
