#pragma once

#include <optional>
#include <vector>

#include "qineq/energy.hpp"
#include "qineq/numerics.hpp"

namespace qineq {

enum class SamplingKind { Lorentzian, Gaussian, Tabulated };

/// A normalized, non-negative weighting function rho(x) with derivative.
class SamplingFunction {
 public:
  /// rho(x) = tau / (pi (x^2 + tau^2)). Throws InvalidScale for tau <= 0.
  static SamplingFunction lorentzian(double tau);
  /// Zero-mean normal density. Throws InvalidScale for sigma <= 0.
  static SamplingFunction gaussian(double sigma);
  /// Piecewise-linear interpolant of (x, rho) samples, renormalized so the
  /// trapezoid rule gives unit mass, and zero outside [x.front(), x.back()].
  /// The derivative is the linear interpolant of centred differences at the
  /// nodes (one-sided at the ends).
  ///
  /// Throws NegativeDensity for rho < 0 and InvalidArgument for fewer than
  /// two points, a non-increasing grid or zero total mass.
  static SamplingFunction tabulated(std::vector<double> x, std::vector<double> rho);

  SamplingKind kind() const { return kind_; }
  /// tau, sigma, or 1 for tabulated input.
  double scale() const { return scale_; }

  double density(double x) const;
  double derivative(double x) const;

  /// The closure of {rho > 0}; nullopt for the whole real line.
  std::optional<Interval> support() const;

  /// rho_s(x) = rho(x/s)/s. Throws InvalidScale for s <= 0.
  SamplingFunction scaled(double s) const;

  /// Exact integral of rho over [lo, hi].
  double mass_between(double lo, double hi) const;

  const std::vector<double>& nodes() const { return x_; }
  const std::vector<double>& values() const { return rho_; }

 private:
  SamplingFunction() = default;

  SamplingKind kind_ = SamplingKind::Lorentzian;
  double scale_ = 1.0;
  std::vector<double> x_;
  std::vector<double> rho_;
  std::vector<double> slope_;  // nodal derivative estimates
};

struct QIBound {
  /// -(1/24 pi) int rho'^2 / rho dx by quadrature; -infinity when divergent.
  double quadrature = 0.0;
  /// -1/(24 pi tau^2), the closed form quoted for the Lorentzian; absent
  /// for other kinds.
  std::optional<double> closed_form;
  bool divergent = false;
  double error_estimate = 0.0;
};

/// Evaluates the spatial bound functional. A density that reaches zero with
/// nonzero slope makes the integral diverge; that is reported through
/// `divergent` with quadrature = -infinity (still safe to compare against).
QIBound qi_bound(const SamplingFunction& rho, const Tolerances& tol = {1e-12, 1e-15, 400});

/// Same as qi_bound() but throws DivergentBound instead of returning -inf.
double qi_bound_finite(const SamplingFunction& rho, const Tolerances& tol = {1e-12, 1e-15, 400});

/// int T00(x) rho(x) dx = region1_value * (mass of rho between the
/// barriers). For the Lorentzian the closed form -(2 eta/pi) atan(a/(2 tau))
/// is returned after a quadrature cross-check; a mismatch above 1e-10
/// relative throws InvariantViolation.
double weighted_density(const DensityProfile& profile, const SamplingFunction& rho,
                        const Tolerances& tol = {1e-13, 1e-16, 400});

struct QIReport {
  double tau = 0.0;
  double lhs = 0.0;
  double bound_closed_form = 0.0;
  double bound_quadrature = 0.0;
  bool violated_vs_closed_form = false;
  bool violated_vs_quadrature = false;
  double ratio = 0.0;        ///< lhs / bound_quadrature
  double bound_factor = 0.0;  ///< bound_closed_form / bound_quadrature (2 for the Lorentzian)
  std::optional<double> critical_tau_closed_form;
  std::optional<double> critical_tau_quadrature;
};

enum class BoundChoice { ClosedForm, Quadrature };

/// Smallest Lorentzian width above which lhs < bound for every larger width
/// on a logarithmic scan of [1e-4 a, 1e4 a], refined by solve_root; nullopt
/// if the bound is never violated on that range.
std::optional<double> critical_tau(const DensityProfile& profile, BoundChoice choice);

/// Lorentzian report at width tau for an already computed profile.
/// Throws InvalidScale for tau <= 0.
QIReport violation_report(const DensityProfile& profile, double tau);

/// Builds the eta-only profile of pot and reports at tau.
QIReport violation_report(const PotentialSpec& pot, double tau);

}  // namespace qineq
