#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qineq {

enum class ErrorKind {
  InvalidArgument,
  QuadratureFailure,
  IntegrandSingularity,
  InsufficientAveragingWindow,
  InvalidBracket,
  InvalidFrequency,
  BoxTooSmall,
  EigenvalueSolveFailure,
  OutsideBox,
  SingularPoint,
  InvalidScale,
  NegativeDensity,
  DivergentBound,
  NonInverseLengthBehavior,
  SpectrumGap,
  InvariantViolation,
};

std::string_view to_string(ErrorKind kind);

/// Base class for every failure raised by the library. The kind is stable and
/// is what the CLI serializes into its machine-readable error object.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Adaptive quadrature ran out of its subdivision budget.
class QuadratureFailure : public Error {
 public:
  QuadratureFailure(double partial_value, double error_estimate);

  double partial_value() const noexcept { return partial_value_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double partial_value_;
  double error_estimate_;
};

/// The integrand produced NaN or an infinity.
class IntegrandSingularity : public Error {
 public:
  explicit IntegrandSingularity(double location);

  double location() const noexcept { return location_; }

 private:
  double location_;
};

}  // namespace qineq
