#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <variant>

namespace qineq {

using RealFunction = std::function<double(double)>;

struct Tolerances {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// Subdivision budget for adaptive quadrature, iteration budget for
  /// root and fixed-point solvers.
  int max_iter = 200;

  /// Throws InvalidArgument unless both tolerances are positive and
  /// max_iter >= 1.
  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// How [start, inf) is folded onto (0, 1).
enum class TailMap {
  Logarithmic,  ///< x = start - scale*ln(1 - t); suits exponential decay
  Algebraic,    ///< x = start + scale*t/(1 - t); suits power-law decay
};

struct HalfLine {
  double start = 0.0;
  double scale = 1.0;
  TailMap map = TailMap::Logarithmic;
};

using Domain = std::variant<Interval, HalfLine>;

/// Globally adaptive Gauss-Kronrod (7/15) quadrature.
///
/// Panels are bisected largest-error-first until the summed error estimate
/// drops below max(abs_tol, rel_tol*|value|). The final value is summed over
/// panels in left-to-right order, so identical inputs give bit-identical
/// results.
///
/// Throws QuadratureFailure when the subdivision budget is exhausted and
/// IntegrandSingularity when f returns a non-finite value.
QuadratureResult integrate(const RealFunction& f, const Domain& domain,
                           const Tolerances& tol = {});

/// Same as integrate() over [edges.front(), edges.back()], but starting from
/// the given panel edges. Useful when the integrand has known kinks or
/// oscillates with a known period. The budget is max_iter subdivisions on
/// top of the initial panels.
QuadratureResult integrate_panels(const RealFunction& f,
                                  std::span<const double> edges,
                                  const Tolerances& tol = {});

/// Mean-value evaluation of an integral over [start, inf) that converges
/// only in the mean because f keeps oscillating with the given period.
///
/// The cumulative integrals I_k = int_start^{start + k*period} f are formed
/// for k = 1..cycles; the first half are discarded and the rest averaged.
/// error_estimate is the spread (max - min) of the averaged partial values
/// plus the accumulated quadrature error.
///
/// Throws InsufficientAveragingWindow when cycles < 4.
QuadratureResult average_oscillatory(const RealFunction& f, double start,
                                     double period, int cycles,
                                     const Tolerances& tol = {},
                                     int panels_per_period = 4);

/// Root of f on [lo, hi] by bisection with secant (Illinois) refinement.
/// Terminates when the bracket is narrower than
/// max(abs_tol, rel_tol*|x|) or f vanishes exactly.
///
/// Throws InvalidBracket if f(lo) and f(hi) have the same strict sign.
double solve_root(const RealFunction& f, double lo, double hi,
                  const Tolerances& tol = {});

/// Compensated (Neumaier) running sum with a fixed, caller-defined order.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace qineq
