#include "qineq/qi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "qineq/errors.hpp"

namespace qineq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_scale(double s, const char* name) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw Error(ErrorKind::InvalidScale, std::string(name) + " must be positive and finite");
  }
}

// Index i with x[i] <= t < x[i+1]; t must lie inside [x.front(), x.back()].
std::size_t segment_of(const std::vector<double>& x, double t) {
  const auto it = std::upper_bound(x.begin(), x.end(), t);
  const auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - x.begin() - 1, 0));
  return std::min(i, x.size() - 2);
}

double lerp(double x0, double x1, double y0, double y1, double t) {
  return y0 + (y1 - y0) * (t - x0) / (x1 - x0);
}

}  // namespace

SamplingFunction SamplingFunction::lorentzian(double tau) {
  require_scale(tau, "tau");
  SamplingFunction f;
  f.kind_ = SamplingKind::Lorentzian;
  f.scale_ = tau;
  return f;
}

SamplingFunction SamplingFunction::gaussian(double sigma) {
  require_scale(sigma, "sigma");
  SamplingFunction f;
  f.kind_ = SamplingKind::Gaussian;
  f.scale_ = sigma;
  return f;
}

SamplingFunction SamplingFunction::tabulated(std::vector<double> x, std::vector<double> rho) {
  if (x.size() != rho.size() || x.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "tabulated sampling needs >= 2 matching (x, rho) pairs");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(rho[i])) {
      throw Error(ErrorKind::InvalidArgument, "tabulated samples must be finite");
    }
    if (rho[i] < 0.0) {
      throw Error(ErrorKind::NegativeDensity, "rho[" + std::to_string(i) + "] is negative");
    }
    if (i > 0 && !(x[i] > x[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "tabulated grid must be strictly increasing");
    }
  }
  CompensatedSum mass;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    mass.add(0.5 * (rho[i] + rho[i + 1]) * (x[i + 1] - x[i]));
  }
  if (!(mass.value() > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "tabulated density has zero mass");
  }
  for (double& r : rho) r /= mass.value();

  const std::size_t n = x.size();
  std::vector<double> slope(n);
  slope[0] = (rho[1] - rho[0]) / (x[1] - x[0]);
  slope[n - 1] = (rho[n - 1] - rho[n - 2]) / (x[n - 1] - x[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    slope[i] = (rho[i + 1] - rho[i - 1]) / (x[i + 1] - x[i - 1]);
  }

  SamplingFunction f;
  f.kind_ = SamplingKind::Tabulated;
  f.scale_ = 1.0;
  f.x_ = std::move(x);
  f.rho_ = std::move(rho);
  f.slope_ = std::move(slope);
  return f;
}

double SamplingFunction::density(double x) const {
  switch (kind_) {
    case SamplingKind::Lorentzian:
      return scale_ / (kPi * (x * x + scale_ * scale_));
    case SamplingKind::Gaussian: {
      const double z = x / scale_;
      return std::exp(-0.5 * z * z) / (scale_ * std::sqrt(2.0 * kPi));
    }
    case SamplingKind::Tabulated: {
      if (x < x_.front() || x > x_.back()) return 0.0;
      const std::size_t i = segment_of(x_, x);
      return lerp(x_[i], x_[i + 1], rho_[i], rho_[i + 1], x);
    }
  }
  return 0.0;
}

double SamplingFunction::derivative(double x) const {
  switch (kind_) {
    case SamplingKind::Lorentzian: {
      const double d = x * x + scale_ * scale_;
      return -2.0 * scale_ * x / (kPi * d * d);
    }
    case SamplingKind::Gaussian:
      return -x / (scale_ * scale_) * density(x);
    case SamplingKind::Tabulated: {
      if (x < x_.front() || x > x_.back()) return 0.0;
      const std::size_t i = segment_of(x_, x);
      return lerp(x_[i], x_[i + 1], slope_[i], slope_[i + 1], x);
    }
  }
  return 0.0;
}

std::optional<Interval> SamplingFunction::support() const {
  if (kind_ != SamplingKind::Tabulated) return std::nullopt;
  return Interval{x_.front(), x_.back()};
}

SamplingFunction SamplingFunction::scaled(double s) const {
  require_scale(s, "scale factor");
  switch (kind_) {
    case SamplingKind::Lorentzian: return lorentzian(scale_ * s);
    case SamplingKind::Gaussian: return gaussian(scale_ * s);
    case SamplingKind::Tabulated: {
      std::vector<double> x = x_;
      std::vector<double> rho = rho_;
      for (double& v : x) v *= s;
      for (double& v : rho) v /= s;
      SamplingFunction f = tabulated(std::move(x), std::move(rho));
      f.scale_ = scale_ * s;
      return f;
    }
  }
  return *this;
}

double SamplingFunction::mass_between(double lo, double hi) const {
  if (hi < lo) return -mass_between(hi, lo);
  switch (kind_) {
    case SamplingKind::Lorentzian:
      return (std::atan(hi / scale_) - std::atan(lo / scale_)) / kPi;
    case SamplingKind::Gaussian: {
      const double k = 1.0 / (scale_ * std::sqrt(2.0));
      return 0.5 * (std::erf(hi * k) - std::erf(lo * k));
    }
    case SamplingKind::Tabulated: {
      lo = std::max(lo, x_.front());
      hi = std::min(hi, x_.back());
      if (!(hi > lo)) return 0.0;
      CompensatedSum mass;
      const std::size_t first = segment_of(x_, lo);
      const std::size_t last = segment_of(x_, hi);
      for (std::size_t i = first; i <= last; ++i) {
        const double l = std::max(lo, x_[i]);
        const double h = std::min(hi, x_[i + 1]);
        if (h <= l) continue;
        const double yl = lerp(x_[i], x_[i + 1], rho_[i], rho_[i + 1], l);
        const double yh = lerp(x_[i], x_[i + 1], rho_[i], rho_[i + 1], h);
        mass.add(0.5 * (yl + yh) * (h - l));
      }
      return mass.value();
    }
  }
  return 0.0;
}

QIBound qi_bound(const SamplingFunction& rho, const Tolerances& tol) {
  const auto integrand = [&rho](double x) {
    const double r = rho.density(x);
    const double d = rho.derivative(x);
    if (r == 0.0) return d == 0.0 ? 0.0 : kInf;
    return d * d / r;
  };
  const double prefactor = -1.0 / (24.0 * kPi);
  QIBound bound;
  switch (rho.kind()) {
    case SamplingKind::Lorentzian:
    case SamplingKind::Gaussian: {
      // Both kinds are even, so integrate x >= 0 and double.
      const TailMap map =
          rho.kind() == SamplingKind::Lorentzian ? TailMap::Algebraic : TailMap::Logarithmic;
      const QuadratureResult r = integrate(integrand, HalfLine{0.0, rho.scale(), map}, tol);
      bound.quadrature = prefactor * 2.0 * r.value;
      bound.error_estimate = std::abs(prefactor) * 2.0 * r.error_estimate;
      if (rho.kind() == SamplingKind::Lorentzian) {
        bound.closed_form = prefactor / (rho.scale() * rho.scale());
      }
      return bound;
    }
    case SamplingKind::Tabulated: {
      const auto& x = rho.nodes();
      const auto& values = rho.values();
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (values[i] == 0.0 && rho.derivative(x[i]) != 0.0) {
          bound.quadrature = -kInf;
          bound.divergent = true;
          return bound;
        }
      }
      try {
        const QuadratureResult r = integrate_panels(integrand, x, tol);
        bound.quadrature = prefactor * r.value;
        bound.error_estimate = std::abs(prefactor) * r.error_estimate;
      } catch (const IntegrandSingularity&) {
        bound.quadrature = -kInf;
        bound.divergent = true;
      }
      return bound;
    }
  }
  return bound;
}

double qi_bound_finite(const SamplingFunction& rho, const Tolerances& tol) {
  const QIBound b = qi_bound(rho, tol);
  if (b.divergent) {
    throw Error(ErrorKind::DivergentBound,
                "rho'^2/rho is not integrable: the density reaches zero with nonzero slope");
  }
  return b.quadrature;
}

double weighted_density(const DensityProfile& profile, const SamplingFunction& rho,
                        const Tolerances& tol) {
  const double edge = profile.separation / 2.0;
  std::vector<double> edges = {-edge, 0.0, edge};
  if (const auto support = rho.support()) {
    for (double x : rho.nodes()) {
      if (x > -edge && x < edge) edges.push_back(x);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  }
  const auto density = [&rho](double x) { return rho.density(x); };
  const double inside = integrate_panels(density, edges, tol).value;

  if (rho.kind() != SamplingKind::Lorentzian) return profile.region1_value * inside;

  const double closed_mass = 2.0 / kPi * std::atan(profile.separation / (2.0 * rho.scale()));
  if (std::abs(inside - closed_mass) > 1e-10 * closed_mass) {
    throw Error(ErrorKind::InvariantViolation,
                "Lorentzian weight between the barriers disagrees with its closed form");
  }
  return profile.region1_value * closed_mass;
}

std::optional<double> critical_tau(const DensityProfile& profile, BoundChoice choice) {
  const double a = profile.separation;
  const auto gap = [&](double tau) {
    const SamplingFunction rho = SamplingFunction::lorentzian(tau);
    const QIBound b = qi_bound(rho);
    const double bound = choice == BoundChoice::ClosedForm ? *b.closed_form : b.quadrature;
    return weighted_density(profile, rho) - bound;
  };
  constexpr int kPoints = 161;
  std::vector<double> taus(kPoints);
  int last_safe = -1;
  for (int i = 0; i < kPoints; ++i) {
    taus[static_cast<std::size_t>(i)] = a * std::pow(10.0, -4.0 + 8.0 * i / (kPoints - 1));
    if (!(gap(taus[static_cast<std::size_t>(i)]) < 0.0)) last_safe = i;
  }
  if (last_safe == kPoints - 1) return std::nullopt;
  if (last_safe < 0) return taus.front();
  const auto i = static_cast<std::size_t>(last_safe);
  return solve_root(gap, taus[i], taus[i + 1], {1e-14, 1e-300, 400});
}

QIReport violation_report(const DensityProfile& profile, double tau) {
  const SamplingFunction rho = SamplingFunction::lorentzian(tau);
  const QIBound bound = qi_bound(rho);
  QIReport r;
  r.tau = tau;
  r.lhs = weighted_density(profile, rho);
  r.bound_closed_form = *bound.closed_form;
  r.bound_quadrature = bound.quadrature;
  r.violated_vs_closed_form = r.lhs < r.bound_closed_form;
  r.violated_vs_quadrature = r.lhs < r.bound_quadrature;
  r.ratio = r.lhs / r.bound_quadrature;
  r.bound_factor = r.bound_closed_form / r.bound_quadrature;
  r.critical_tau_closed_form = critical_tau(profile, BoundChoice::ClosedForm);
  r.critical_tau_quadrature = critical_tau(profile, BoundChoice::Quadrature);
  return r;
}

QIReport violation_report(const PotentialSpec& pot, double tau) {
  require_scale(tau, "tau");
  return violation_report(density_profile_without_beta(pot), tau);
}

}  // namespace qineq
