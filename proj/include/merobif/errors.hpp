#pragma once

#include <stdexcept>
#include <string>

namespace merobif {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller mistakes: unknown names, violated preconditions, malformed input.
class UsageError : public Error {
 public:
  using Error::Error;
};

class UnknownNameError : public UsageError {
 public:
  using UsageError::UsageError;
};

class PreconditionError : public UsageError {
 public:
  using UsageError::UsageError;
};

/// Evaluation outside the domain of a map (e.g. at the point at infinity).
class DomainError : public UsageError {
 public:
  using UsageError::UsageError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Failures of a numerical procedure on valid input.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double last_multiplier_gap = -1.0)
      : NumericalError(what), last_multiplier_gap_(last_multiplier_gap) {}

  /// |mu - 1| at the last Newton iterate, or a negative value when unknown.
  double last_multiplier_gap() const noexcept { return last_multiplier_gap_; }

 private:
  double last_multiplier_gap_;
};

/// An orbit ran into a pole while a finite value was required.
class PoleHitError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Singular Newton system, or a solution rejected as degenerate
/// (non-minimal period or preperiod, wrong multiplier type).
class DegenerateError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The defining relation holds on a whole neighbourhood of the solution.
class PersistentRelationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InconclusiveError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace merobif
