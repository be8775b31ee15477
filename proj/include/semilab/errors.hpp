#pragma once

#include <stdexcept>
#include <string>

namespace semilab {

/// Base class for every error raised by the library. The CLI maps the
/// concrete type to an exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

/// Bad arguments: invalid construction parameters, points outside a domain,
/// negative boundary data and similar precondition violations.
class DomainError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "domain_error"; }
};

/// The requested operation is not defined for this input class
/// (e.g. a limsup classification for a nonincreasing nonlinearity).
class UnsupportedError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "unsupported"; }
};

/// A mathematical precondition of a solver fails; carries the measured value
/// and the threshold it was compared against.
class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, double value, double threshold)
      : Error(what), value_(value), threshold_(threshold) {}
  const char* kind() const noexcept override { return "precondition"; }
  double value() const noexcept { return value_; }
  double threshold() const noexcept { return threshold_; }

 private:
  double value_;
  double threshold_;
};

/// A linear solve failed or returned a residual above its tolerance.
class SolverError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "solver_error"; }
};

/// A nonlinear iteration stopped without reaching its tolerance.
class NonconvergenceError : public SolverError {
 public:
  NonconvergenceError(const std::string& what, double bracket_gap, double residual)
      : SolverError(what), bracket_gap_(bracket_gap), residual_(residual) {}
  const char* kind() const noexcept override { return "nonconvergence"; }
  double bracket_gap() const noexcept { return bracket_gap_; }
  double residual() const noexcept { return residual_; }

 private:
  double bracket_gap_;
  double residual_;
};

/// An internal invariant was breached (should never happen for valid input).
class InvariantError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "invariant_breach"; }
};

}  // namespace semilab
