#include "qineq/errors.hpp"

#include <cstdio>

namespace qineq {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::QuadratureFailure: return "quadrature failure";
    case ErrorKind::IntegrandSingularity: return "integrand singularity";
    case ErrorKind::InsufficientAveragingWindow: return "insufficient averaging window";
    case ErrorKind::InvalidBracket: return "invalid bracket";
    case ErrorKind::InvalidFrequency: return "invalid frequency";
    case ErrorKind::BoxTooSmall: return "box too small for mode";
    case ErrorKind::EigenvalueSolveFailure: return "eigenvalue solve failure";
    case ErrorKind::OutsideBox: return "outside box";
    case ErrorKind::SingularPoint: return "evaluation on singular point";
    case ErrorKind::InvalidScale: return "invalid scale";
    case ErrorKind::NegativeDensity: return "negative density";
    case ErrorKind::DivergentBound: return "divergent bound";
    case ErrorKind::NonInverseLengthBehavior: return "non-1/L behavior";
    case ErrorKind::SpectrumGap: return "spectrum gap";
    case ErrorKind::InvariantViolation: return "invariant violation";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

namespace {

std::string format_partial(double partial, double error) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "budget exhausted (partial value %.17g, error estimate %.3g)",
                partial, error);
  return buf;
}

std::string format_location(double x) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "non-finite integrand at x = %.17g", x);
  return buf;
}

}  // namespace

QuadratureFailure::QuadratureFailure(double partial_value, double error_estimate)
    : Error(ErrorKind::QuadratureFailure, format_partial(partial_value, error_estimate)),
      partial_value_(partial_value),
      error_estimate_(error_estimate) {}

IntegrandSingularity::IntegrandSingularity(double location)
    : Error(ErrorKind::IntegrandSingularity, format_location(location)), location_(location) {}

}  // namespace qineq
