#pragma once

#include <stdexcept>
#include <string>

namespace tmlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

/// Invalid input (bad radius, lambda outside its admissible range, ...).
/// The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "ValidationError"; }
};

/// A numerical procedure failed to deliver. The CLI maps these to exit code 3.
class SolverError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "SolverError"; }
};

/// Argument or intermediate quantity outside the representable/configured range.
class RangeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
  const char* kind() const noexcept override { return "RangeError"; }
};

/// The trajectory never crossed zero before the configured maximum radius.
class NoZeroError : public SolverError {
 public:
  using SolverError::SolverError;
  const char* kind() const noexcept override { return "NoZeroError"; }
};

class StepLimitError : public SolverError {
 public:
  using SolverError::SolverError;
  const char* kind() const noexcept override { return "StepLimitError"; }
};

class OverflowError : public SolverError {
 public:
  using SolverError::SolverError;
  const char* kind() const noexcept override { return "OverflowError"; }
};

class BracketError : public SolverError {
 public:
  using SolverError::SolverError;
  const char* kind() const noexcept override { return "BracketError"; }
};

class StagnationError : public SolverError {
 public:
  using SolverError::SolverError;
  const char* kind() const noexcept override { return "StagnationError"; }
};

/// First-zero radius failed to be monotone in alpha during bisection. This
/// would mean two positive solutions for one lambda, so it is never resolved
/// silently.
class MultiplicityWarning : public SolverError {
 public:
  MultiplicityWarning(const std::string& what, double alpha_lo, double rho_lo, double alpha_hi,
                      double rho_hi)
      : SolverError(what),
        alpha_lo(alpha_lo),
        rho_lo(rho_lo),
        alpha_hi(alpha_hi),
        rho_hi(rho_hi) {}
  const char* kind() const noexcept override { return "MultiplicityWarning"; }

  double alpha_lo, rho_lo, alpha_hi, rho_hi;
};

class AmbiguousCount : public SolverError {
 public:
  using SolverError::SolverError;
  const char* kind() const noexcept override { return "AmbiguousCount"; }
};

class UnsupportedIdentity : public ValidationError {
 public:
  using ValidationError::ValidationError;
  const char* kind() const noexcept override { return "UnsupportedIdentity"; }
};

}  // namespace tmlab
