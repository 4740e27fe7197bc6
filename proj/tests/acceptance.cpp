// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "qineq/energy.hpp"
#include "qineq/errors.hpp"
#include "qineq/modes.hpp"
#include "qineq/oracle.hpp"
#include "qineq/qi.hpp"

namespace {

using namespace qineq;

constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double rel(double value, double expected) { return std::abs(value - expected) / std::abs(expected); }

PotentialSpec unit_coupling(double c) { return PotentialSpec::from_coupling(c, 1.0); }

Verdict dirichlet_limit() {
  const double sum = eta_components(unit_coupling(1e6)).sum();
  const double err = rel(sum, -kPi / 24.0);
  return {err < 1e-3, fmt("eta1+eta2 = %.10f, relative error %.2e (limit 1e-3)", sum, err)};
}

Verdict violation() {
  const DensityProfile profile = DensityProfile::from_depth(kPi / 24.0, 1.0);
  const QIReport at10 = violation_report(profile, 10.0);
  const QIReport at100 = violation_report(profile, 100.0);
  const double growth = at100.ratio / at10.ratio;
  const bool pass = rel(at10.lhs, -4.163e-3) < 1e-3 && rel(at10.bound_closed_form, -1.326e-4) < 1e-3 &&
                    at10.violated_vs_closed_form && at10.violated_vs_quadrature && std::abs(growth - 10.0) <= 0.5;
  return {pass, fmt("lhs = %.4e, closed-form bound = %.4e, quadrature bound = %.4e, violated = %s/%s, "
                    "ratio(100)/ratio(10) = %.4f",
                    at10.lhs, at10.bound_closed_form, at10.bound_quadrature,
                    at10.violated_vs_closed_form ? "yes" : "no", at10.violated_vs_quadrature ? "yes" : "no",
                    growth)};
}

Verdict oracle_equivalence() {
  const auto pot = unit_coupling(1.0);
  const Extrapolation e = continuum_extrapolate(pot, {50.0, 100.0, 200.0}, 0.0);
  const double continuum = eta_components(pot).sum();
  const double err = rel(e.limit, continuum);
  return {err < 0.01, fmt("1/L limit = %.8f vs eta1+eta2 = %.8f, relative error %.2e (limit 1e-2)", e.limit,
                          continuum, err)};
}

Verdict region2_decay() {
  const auto pot = unit_coupling(1.0);
  const Extrapolation e = continuum_extrapolate(pot, {50.0, 100.0, 200.0}, 0.75);
  const double beta = beta_coefficient(pot);
  const double exponent_err = std::abs(e.exponent + 1.0);
  const double slope_err = rel(e.slope, beta);
  const double coefficient_err = rel(e.coefficient, beta);
  const bool pass = exponent_err <= 0.1 && slope_err <= 0.1 && coefficient_err <= 0.1;
  return {pass, fmt("exponent = %.4f, 1/L coefficient = %.5f, power-law coefficient = %.5f, beta = %.5f "
                    "(errors %.1f%%, %.1f%%)",
                    e.exponent, e.slope, e.coefficient, beta, 100.0 * slope_err, 100.0 * coefficient_err)};
}

Verdict jump_identity() {
  const auto pot = unit_coupling(1.0);
  const FiniteBoxRun run = FiniteBoxRun::make(pot, BoxSpec::make(100.0, pot), 50);
  const JumpReport r = jump_consistency(run);
  const double gap = std::abs(r.total_jump - r.density_difference);
  const bool pass = r.per_mode.size() == 100 && r.max_relative_mismatch <= 1e-12 && gap <= 1e-13;
  return {pass, fmt("%zu modes, max per-mode relative mismatch %.2e, |total jump - density difference| = %.2e",
                    r.per_mode.size(), r.max_relative_mismatch, gap)};
}

Verdict mode_validity() {
  struct Case {
    double coupling, length;
    int n_max;
  };
  double worst = 0.0;
  std::size_t count = 0;
  for (const Case& c : {Case{1.0, 100.0, 200}, Case{0.5, 20.0, 100}, Case{5.0, 50.0, 100}, Case{50.0, 30.0, 60}}) {
    const auto pot = unit_coupling(c.coupling);
    const BoxSpec box = BoxSpec::make(c.length, pot);
    for (const ModeSolution& m : spectrum(pot, box, c.n_max)) {
      worst = std::max(worst, validate_mode(m, pot, box, NormCheck::Quadrature).max());
      ++count;
    }
  }
  return {worst < 1e-10, fmt("%zu modes over 4 configurations, worst residual %.2e (limit 1e-10)", count, worst)};
}

Verdict spectral_cross_check() {
  double worst = 0.0;
  std::string detail;
  for (double c : {0.5, 1.0, 5.0}) {
    const auto pot = unit_coupling(c);
    const double err = rel(region1_density_spectral(pot, 40.0).value, eta_components(pot).sum());
    worst = std::max(worst, err);
    detail += fmt("coupling %g: %.2e; ", c, err);
  }
  return {worst < 0.01, detail + "limit 1e-2"};
}

Verdict bound_quadrature() {
  double worst_l = 0.0;
  double worst_g = 0.0;
  bool factor_flagged = true;
  for (double s : {0.1, 1.0, 10.0}) {
    const QIBound l = qi_bound(SamplingFunction::lorentzian(s));
    worst_l = std::max(worst_l, rel(l.quadrature, -1.0 / (48.0 * kPi * s * s)));
    factor_flagged = factor_flagged && l.closed_form && std::abs(*l.closed_form / l.quadrature - 2.0) < 1e-8;
    const QIBound g = qi_bound(SamplingFunction::gaussian(s));
    worst_g = std::max(worst_g, rel(g.quadrature, -1.0 / (24.0 * kPi * s * s)));
  }
  const QIReport r = violation_report(DensityProfile::from_depth(kPi / 24.0, 1.0), 10.0);
  factor_flagged = factor_flagged && std::abs(r.bound_factor - 2.0) < 1e-8;
  return {worst_l < 1e-8 && worst_g < 1e-8 && factor_flagged,
          fmt("Lorentzian error %.2e, Gaussian error %.2e, reported closed-form/quadrature factor %.10f", worst_l,
              worst_g, r.bound_factor)};
}

Verdict independent_eigensolver() {
  const auto pot = unit_coupling(1.0);
  const BoxSpec box = BoxSpec::make(20.0, pot);
  const auto shot = shooting_extrapolated(pot, box, {1.0 / 200.0, 1.0 / 400.0, 1.0 / 800.0}, 10);
  const auto exact = lowest_frequencies(pot, box, 10);
  double worst = 0.0;
  for (std::size_t k = 0; k < exact.size(); ++k) worst = std::max(worst, rel(shot[k], exact[k]));
  return {worst < 1e-6, fmt("10 lowest modes, worst relative error %.2e (limit 1e-6)", worst)};
}

Verdict positivity() {
  bool pass = true;
  std::string detail;
  for (double c : {0.5, 1.0, 5.0, 50.0}) {
    const double total = density_profile(unit_coupling(c)).total_energy();
    pass = pass && total > 0.0;
    detail += fmt("beta - eta a = %.5f at coupling %g; ", total, c);
  }
  const auto pot = unit_coupling(1.0);
  const BoxSpec box = BoxSpec::make(100.0, pot);
  const double box_energy = integrated_box_energy(FiniteBoxRun::make(pot, box, default_n_max(pot, box)));
  pass = pass && box_energy >= 0.0;
  return {pass, detail + fmt("finite-box energy = %.5f", box_energy)};
}

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds, 0 for none
  std::function<Verdict()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Dirichlet-limit recovery", 5.0, dirichlet_limit},
      {2, "Violation reproduction", 1.0, violation},
      {3, "Oracle equivalence", 60.0, oracle_equivalence},
      {4, "Region-II decay", 60.0, region2_decay},
      {5, "Jump consistency", 0.0, jump_identity},
      {6, "Mode validity", 0.0, mode_validity},
      {7, "Spectral cross-check", 0.0, spectral_cross_check},
      {8, "Bound quadrature", 0.0, bound_quadrature},
      {9, "Independent eigensolver", 120.0, independent_eigensolver},
      {10, "Positivity", 0.0, positivity},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0.0 && seconds > c.time_limit) {
      v.pass = false;
      v.detail += fmt(" [over the %.0f s budget]", c.time_limit);
    }
    if (!v.pass) ++failures;
    std::printf("%s %2d %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
