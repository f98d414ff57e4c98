#pragma once

#include <stdexcept>
#include <string>

namespace modstab {

enum class ErrorKind {
  InvalidArgument,
  UnsupportedSymbol,
  NumericRange,
  ConvergenceFailure,
  IllConditioned,
  DegenerateParametrization,
  AssumptionViolated,
  ContinuationStalled,
  Parse,
  Migration,
  Numeric,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base error for the library. The kind drives the CLI exit-code mapping.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Newton iteration ran out of iterations; carries the last residual sup-norm.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, double last_residual)
      : Error(ErrorKind::ConvergenceFailure, message), last_residual_(last_residual) {}

  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

}  // namespace modstab
