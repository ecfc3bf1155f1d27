#pragma once

#include <stdexcept>
#include <string>

namespace pencil_lab {

// Exit codes shared by every CLI command.
enum class ExitCode : int {
  kOk = 0,
  kInconclusive = 2,
  kInvalidInput = 3,
  kNumericFailure = 4,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept = 0;
};

// Bad arguments, malformed configs, dimension mismatches.
class InputError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kInvalidInput; }
};

// Solver non-convergence, failed quadrature.
class NumericError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kNumericFailure; }
};

// A discretized operator lost a property its continuum counterpart has
// (e.g. L not positive definite); usually fixed by a larger basis or alpha.
class DiscretizationError : public NumericError {
 public:
  using NumericError::NumericError;
};

// Value outside the admissible domain of an operation (nonpositive
// eigenvalue where a fractional power is requested).
class DomainError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace pencil_lab
