#include "qineq/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qineq/errors.hpp"

namespace qineq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;

// All frequency integrals run over Omega = omega*a/2 with a unit-separation
// potential of the same coupling, so the dependence on a is an exact
// prefactor.
PotentialSpec unit_potential(double coupling) { return PotentialSpec::from_coupling(coupling, 1.0); }

double omega_of(double half_phase) { return 2.0 * half_phase; }

// Narrow transmission resonances below the coupling scale. Odd modes resonate
// where Omega cos Omega + coupling sin Omega = 0, even modes where
// coupling cos Omega - Omega sin Omega = 0; half-widths shrink like
// (Omega/coupling)^2.
std::vector<double> resonance_breakpoints(double coupling, double upper) {
  std::vector<double> points;
  const double limit = std::min(upper, 0.6 * coupling);
  const Tolerances root_tol{1e-15, 1e-15, 200};
  const auto add_cluster = [&](double root) {
    const double width = std::max(root * root / (coupling * coupling), 1e-13 * root);
    for (double k : {-8.0, -1.0, 0.0, 1.0, 8.0}) {
      const double p = root + k * width;
      if (p > 0.0 && p < upper) points.push_back(p);
    }
  };
  for (int k = 0; k * kPi < limit; ++k) {
    const double lo = k * kPi;
    if (k >= 1) {
      const auto odd = [coupling](double w) { return w * std::cos(w) + coupling * std::sin(w); };
      add_cluster(solve_root(odd, lo - kHalfPi, lo, root_tol));
    }
    const auto even = [coupling](double w) { return coupling * std::cos(w) - w * std::sin(w); };
    add_cluster(solve_root(even, lo, lo + kHalfPi, root_tol));
  }
  return points;
}

// Quarter-period grid on [0, upper] merged with the resonance clusters.
std::vector<double> head_edges(double coupling, double upper) {
  std::vector<double> edges;
  const int quarters = static_cast<int>(std::ceil(upper / (kPi / 4.0)));
  for (int i = 0; i < quarters; ++i) edges.push_back(i * kPi / 4.0);
  edges.push_back(upper);
  const std::vector<double> extra = resonance_breakpoints(coupling, upper);
  edges.insert(edges.end(), extra.begin(), extra.end());
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

// Smallest multiple of pi/2 that is >= max(start, 2*coupling).
double snapped_start(double start, double coupling) {
  const double lower = std::max(start, 2.0 * coupling);
  return std::ceil(lower / kHalfPi) * kHalfPi;
}

// Number of averaging periods: far enough out that the O(coupling^3/Omega^2)
// bias of whole-period sampling is small, within a fixed budget.
int tail_cycles(double start, double coupling) {
  const double target = std::max(start + 64.0 * kPi, 200.0 * std::pow(std::max(1.0, coupling), 1.5));
  const double cycles = std::ceil((target - start) / kPi);
  return static_cast<int>(std::clamp(cycles, 64.0, 40000.0));
}

// Each tail period integrates to nearly zero, so its absolute tolerance is
// tied to the integrand's envelope (~ coupling^2 / Omega) rather than to the
// net value; noise_floor covers integrands carrying finite-difference noise.
QuadratureResult head_plus_tail(const RealFunction& f, double coupling, double start,
                                const Tolerances& tol, double noise_floor) {
  const std::vector<double> edges = head_edges(coupling, start);
  const int budget = std::max(tol.max_iter, 20000 + 200 * static_cast<int>(edges.size()));
  const Tolerances head_tol{tol.rel_tol, std::max(tol.abs_tol, noise_floor), budget};
  const QuadratureResult head = integrate_panels(f, edges, head_tol);
  const double envelope = (coupling * coupling + coupling) / start;
  const Tolerances tail_tol{tol.rel_tol,
                            std::max({tol.abs_tol, tol.rel_tol * envelope, noise_floor}),
                            tol.max_iter};
  const QuadratureResult tail =
      average_oscillatory(f, start, kPi, tail_cycles(start, coupling), tail_tol, 4);
  return {head.value + tail.value, head.error_estimate + tail.error_estimate,
          head.evaluations + tail.evaluations};
}

}  // namespace

EtaComponents eta_components(const PotentialSpec& pot, const Tolerances& tol) {
  const double coupling = pot.coupling();
  if (coupling == 0.0) return {};
  const auto odd = [coupling](double y) {
    if (y == 0.0) return 1.0 / (1.0 + coupling);
    return y * std::exp(-2.0 * y) / (y - coupling * std::expm1(-2.0 * y) / 2.0);
  };
  const auto even = [coupling](double y) {
    return y * std::exp(-2.0 * y) / (y + coupling * (1.0 + std::exp(-2.0 * y)) / 2.0);
  };
  const HalfLine domain{0.0, 0.5, TailMap::Logarithmic};
  const double prefactor = coupling / (kPi * pot.separation * pot.separation);
  EtaComponents eta{-prefactor * integrate(odd, domain, tol).value,
                    prefactor * integrate(even, domain, tol).value};
  if (!(eta.eta1 <= 0.0 && eta.eta2 >= 0.0 && eta.sum() <= 0.0)) {
    throw Error(ErrorKind::InvariantViolation,
                "eta components have unexpected signs: eta1 = " + std::to_string(eta.eta1) +
                    ", eta2 = " + std::to_string(eta.eta2));
  }
  return eta;
}

QuadratureResult region1_density_spectral(const PotentialSpec& pot, double omega_start,
                                          const Tolerances& tol) {
  const double a = pot.separation;
  if (!(omega_start >= 20.0 / a)) {
    throw Error(ErrorKind::InvalidArgument, "omega_start must be at least 20/a");
  }
  const double coupling = pot.coupling();
  if (coupling == 0.0) return {0.0, 0.0, 1};
  const PotentialSpec unit = unit_potential(coupling);
  const auto integrand = [&unit](double w) {
    const double omega = omega_of(w);
    return (amplitude_sq_minus_one(Parity::Odd, omega, unit) +
            amplitude_sq_minus_one(Parity::Even, omega, unit)) *
           w;
  };
  // Resonance peaks of height ~coupling^2 set a roundoff floor.
  const double start = snapped_start(omega_start * a / 2.0, coupling);
  const double floor = 1e-12 * std::max(1.0, coupling * coupling);
  QuadratureResult r = head_plus_tail(integrand, coupling, start, tol, floor);
  const double scale = 1.0 / (kPi * a * a);
  r.value *= scale;
  r.error_estimate *= scale;
  return r;
}

BetaParts beta_components(const PotentialSpec& pot, const Tolerances& tol) {
  const double coupling = pot.coupling();
  if (coupling == 0.0) return {};
  if (coupling > kMaxBetaCoupling) {
    throw Error(ErrorKind::InvalidArgument, "beta quadrature supports couplings up to 1e3, got " +
                                                std::to_string(coupling));
  }
  const double a = pot.separation;
  const PotentialSpec unit = unit_potential(coupling);

  const auto phase_sum = [&unit](double w) {
    const double omega = omega_of(w);
    return scattering_data(Parity::Odd, omega, unit).phase_shift +
           scattering_data(Parity::Even, omega, unit).phase_shift;
  };
  const auto integrand = [&](double w) {
    const double h = std::min(1e-6 * std::max(1.0, w), 0.5 * w);
    const double phase_slope = (phase_sum(w + h) - phase_sum(w - h)) / (2.0 * h);
    const double omega = omega_of(w);
    const double deficit = normalization_deficit(Parity::Odd, omega, unit) +
                           normalization_deficit(Parity::Even, omega, unit);
    return w * (deficit + phase_slope);
  };
  // B_j + 2 d delta_j / d omega cancels to within the central-difference
  // noise, which grows with the resonance peaks (~coupling^2), so the
  // tolerance floor sits above it.
  const double start = snapped_start(20.0, coupling);
  const double floor = 1e-8 * std::max(1.0, coupling * coupling);
  const QuadratureResult spectral = head_plus_tail(integrand, coupling, start, tol, floor);

  // Period mean of Omega * sum_j delta_j at large Omega, with one Richardson
  // step to remove the O(1/Omega) correction.
  const auto period_mean = [&](double from) {
    const std::vector<double> edges = {from, from + kPi / 4.0, from + kPi / 2.0,
                                       from + 3.0 * kPi / 4.0, from + kPi};
    const auto weighted = [&phase_sum](double w) { return w * phase_sum(w); };
    return integrate_panels(weighted, edges, tol).value / kPi;
  };
  const double far = std::ceil(1e4 * std::max(1.0, coupling) / kPi) * kPi;
  const double limit = 2.0 * period_mean(2.0 * far) - period_mean(far);

  return {spectral.value / (kPi * a), -limit / (kPi * a)};
}

double beta_coefficient(const PotentialSpec& pot, const Tolerances& tol) {
  return beta_components(pot, tol).value();
}

DensityProfile DensityProfile::from_depth(double eta, double separation) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw Error(ErrorKind::InvalidArgument, "well depth eta must be finite and >= 0");
  }
  if (!(separation > 0.0) || !std::isfinite(separation)) {
    throw Error(ErrorKind::InvalidArgument, "separation must be finite and > 0");
  }
  DensityProfile p;
  p.eta1 = 0.0 - eta;
  p.eta2 = 0.0;
  p.region1_value = 0.0 - eta;
  p.eta = eta;
  p.separation = separation;
  return p;
}

double DensityProfile::at(double x) const {
  const double edge = separation / 2.0;
  const double ax = std::abs(x);
  if (ax == edge) {
    throw Error(ErrorKind::SingularPoint, "density is not defined on a barrier");
  }
  return ax < edge ? region1_value : 0.0;
}

double DensityProfile::total_energy() const {
  if (!beta) throw Error(ErrorKind::InvalidArgument, "profile has no region-II coefficient");
  return *beta - eta * separation;
}

DensityProfile density_profile_without_beta(const PotentialSpec& pot, const Tolerances& tol) {
  const EtaComponents c = eta_components(pot, tol);
  DensityProfile p;
  p.eta1 = c.eta1;
  p.eta2 = c.eta2;
  p.region1_value = c.eta1 + c.eta2;
  p.eta = 0.0 - p.region1_value;
  p.separation = pot.separation;
  p.coupling = pot.coupling();
  return p;
}

DensityProfile density_profile(const PotentialSpec& pot, const Tolerances& tol) {
  DensityProfile p = density_profile_without_beta(pot, tol);
  if (pot.coupling() <= kMaxBetaCoupling) p.beta = beta_coefficient(pot, tol);
  return p;
}

}  // namespace qineq
