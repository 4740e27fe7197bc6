#include "qineq/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qineq/energy.hpp"
#include "qineq/errors.hpp"
#include "qineq/modes.hpp"
#include "qineq/oracle.hpp"
#include "qineq/qi.hpp"

namespace qineq::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kVersion = "qineq 0.1.0";
// Above this coupling the tail of the spectral cross-check is too short to
// reach the 1% agreement it is meant to demonstrate.
constexpr double kMaxSpectralCheckCoupling = 50.0;
constexpr double kSpectralStart = 40.0;  // in units of 1/a
constexpr double kShootingBox = 20.0;    // in units of a
constexpr int kShootingModes = 10;
constexpr int kDefaultJumpModes = 50;
constexpr int kDefaultModeCount = 20;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

const char* command_name(Command c) {
  switch (c) {
    case Command::Density: return "density";
    case Command::Qi: return "qi";
    case Command::Sweep: return "sweep";
    case Command::Oracle: return "oracle";
    case Command::Modes: return "modes";
  }
  return "?";
}

const char* axis_name(SweepAxis a) { return a == SweepAxis::Coupling ? "coupling" : "tau"; }
const char* format_name(Format f) { return f == Format::Json ? "json" : "csv"; }
const char* parity_name(Parity p) { return p == Parity::Odd ? "odd" : "even"; }

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_double(v[i]);
  }
  return s;
}

json config_json(const RunConfig& c) {
  json j;
  j["command"] = command_name(c.command);
  j["lambda"] = c.strength;
  j["a"] = c.separation;
  j["coupling"] = c.coupling();
  j["L"] = c.box_length;
  j["n_max"] = c.n_max ? json(*c.n_max) : json(nullptr);
  j["tau"] = c.taus;
  j["Ls"] = c.box_lengths;
  j["eta_depth"] = optional_number(c.eta_depth);
  j["sweep"] = {{"axis", axis_name(c.sweep_axis)},
                {"min", c.grid_min},
                {"max", c.grid_max},
                {"points", c.grid_points}};
  j["format"] = format_name(c.format);
  j["output"] = c.output_path;
  j["config_file"] = c.config_path;
  j["normalize_a"] = c.normalize_a;
  j["tolerances"] = {{"rel_tol", c.tol.rel_tol}, {"abs_tol", c.tol.abs_tol}, {"max_iter", c.tol.max_iter}};
  j["version"] = kVersion;
  return j;
}

std::vector<std::string> config_lines(const RunConfig& c) {
  std::vector<std::string> lines = {
      std::string("command = ") + command_name(c.command),
      "lambda = " + format_double(c.strength),
      "a = " + format_double(c.separation),
      "coupling = " + format_double(c.coupling()),
      "L = " + format_double(c.box_length),
      "n_max = " + (c.n_max ? std::to_string(*c.n_max) : std::string("default")),
      "tau = " + join(c.taus),
      "Ls = " + join(c.box_lengths),
      "eta_depth = " + (c.eta_depth ? format_double(*c.eta_depth) : std::string("none")),
      std::string("sweep_axis = ") + axis_name(c.sweep_axis),
      "grid_min = " + format_double(c.grid_min),
      "grid_max = " + format_double(c.grid_max),
      "points = " + std::to_string(c.grid_points),
      std::string("format = ") + format_name(c.format),
      "output = " + c.output_path,
      "config_file = " + c.config_path,
      std::string("normalize_a = ") + (c.normalize_a ? "true" : "false"),
      "rel_tol = " + format_double(c.tol.rel_tol),
      "abs_tol = " + format_double(c.tol.abs_tol),
      "max_iter = " + std::to_string(c.tol.max_iter),
      std::string("version = ") + kVersion,
  };
  return lines;
}

// Everything a command produces before it is wrapped with the config.
struct Outcome {
  json result;
  json checks = json::object();
  Table table;
};

bool all_checks_pass(const json& checks) {
  for (const auto& item : checks.items()) {
    if (!item.value().at("pass").get<bool>()) return false;
  }
  return true;
}

void add_check(json& checks, const std::string& name, bool pass, double value, double threshold) {
  checks[name] = {{"pass", pass}, {"value", finite_or_null(value)}, {"threshold", threshold}};
}

// Lengths are converted to units of a (the computation then runs at a = 1).
RunConfig in_units_of_a(const RunConfig& c) {
  RunConfig n = c;
  const double a = c.separation;
  n.separation = 1.0;
  n.strength = c.strength * a;
  n.box_length = c.box_length / a;
  for (double& t : n.taus) t /= a;
  for (double& l : n.box_lengths) l /= a;
  if (c.eta_depth) n.eta_depth = *c.eta_depth * a * a;
  if (c.sweep_axis == SweepAxis::Tau) {
    n.grid_min = c.grid_min / a;
    n.grid_max = c.grid_max / a;
  }
  return n;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> g(static_cast<std::size_t>(points));
  if (points == 1) {
    g[0] = lo;
    return g;
  }
  const double llo = std::log10(lo);
  const double lhi = std::log10(hi);
  for (int i = 0; i < points; ++i) {
    g[static_cast<std::size_t>(i)] =
        i == points - 1 ? hi : std::pow(10.0, llo + (lhi - llo) * i / (points - 1));
  }
  return g;
}

int worker_count(std::size_t jobs) {
  int n = 1;
  if (const char* env = std::getenv("QINEQ_THREADS")) {
    n = std::atoi(env);
    if (n < 1) n = 1;
  }
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n), std::max<std::size_t>(jobs, 1)));
}

// Runs job(i) for i in [0, count) on QINEQ_THREADS workers. Each job writes
// only its own slot, so results do not depend on the worker count. The
// first failure in index order is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& job) {
  std::vector<std::exception_ptr> failures(count);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        job(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const int workers = worker_count(count);
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
}

json qi_row_json(const QIReport& r) {
  return {{"tau", r.tau},
          {"lhs", r.lhs},
          {"bound_closed_form", r.bound_closed_form},
          {"bound_quadrature", r.bound_quadrature},
          {"violated_vs_closed_form", r.violated_vs_closed_form},
          {"violated_vs_quadrature", r.violated_vs_quadrature},
          {"ratio", r.ratio},
          {"bound_factor", r.bound_factor}};
}

std::vector<Cell> qi_row_cells(const QIReport& r) {
  return {r.tau, r.lhs, r.bound_closed_form, r.bound_quadrature, r.violated_vs_closed_form,
          r.violated_vs_quadrature, r.ratio, r.bound_factor};
}

const std::vector<std::string> kQiColumns = {"tau", "lhs", "bound_closed_form", "bound_quadrature",
                                             "violated_vs_closed_form", "violated_vs_quadrature",
                                             "ratio", "bound_factor"};

// lhs of a single Lorentzian width without the critical-width scans.
QIReport qi_row(const DensityProfile& profile, double tau) {
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
  return r;
}

DensityProfile qi_profile(const RunConfig& c) {
  if (c.eta_depth) return DensityProfile::from_depth(*c.eta_depth, c.separation);
  return density_profile_without_beta(PotentialSpec::make(c.strength, c.separation), c.tol);
}

Outcome run_density(const RunConfig& c) {
  const PotentialSpec pot = PotentialSpec::make(c.strength, c.separation);
  const double coupling = pot.coupling();
  const EtaComponents eta = eta_components(pot, c.tol);

  std::optional<BetaParts> beta;
  if (coupling <= kMaxBetaCoupling) beta = beta_components(pot, c.tol);
  std::optional<QuadratureResult> spectral;
  if (coupling > 0.0 && coupling <= kMaxSpectralCheckCoupling) {
    spectral = region1_density_spectral(pot, kSpectralStart / c.separation, c.tol);
  }

  const double region1 = eta.sum();
  const std::optional<double> total =
      beta ? std::optional<double>(beta->value() + region1 * c.separation) : std::nullopt;

  Outcome o;
  o.result = {{"coupling", coupling},
              {"eta1", eta.eta1},
              {"eta2", eta.eta2},
              {"region1_value", region1},
              {"eta", 0.0 - region1},
              {"region2_value", 0.0},
              {"beta", beta ? json(beta->value()) : json(nullptr)},
              {"beta_spectral_integral", beta ? json(beta->spectral_integral) : json(nullptr)},
              {"beta_cutoff_boundary", beta ? json(beta->cutoff_boundary) : json(nullptr)},
              {"total_energy", optional_number(total)},
              {"region1_spectral", spectral ? json(spectral->value) : json(nullptr)},
              {"region1_spectral_error", spectral ? json(spectral->error_estimate) : json(nullptr)}};

  if (spectral) {
    const double rel = std::abs(spectral->value - region1) / std::abs(region1);
    add_check(o.checks, "spectral_agreement", rel <= 0.01, rel, 0.01);
  }
  if (total) {
    const bool pass = coupling > 0.0 ? *total > 0.0 : *total == 0.0;
    add_check(o.checks, "total_energy_positive", pass, *total, 0.0);
  }

  o.table.columns = {"coupling", "eta1", "eta2", "region1_value", "eta", "beta",
                     "beta_spectral_integral", "beta_cutoff_boundary", "total_energy", "region1_spectral"};
  const auto opt = [](const std::optional<double>& v) -> Cell {
    if (v) return *v;
    return std::monostate{};
  };
  o.table.rows.push_back({coupling, eta.eta1, eta.eta2, region1, 0.0 - region1,
                          opt(beta ? std::optional<double>(beta->value()) : std::nullopt),
                          opt(beta ? std::optional<double>(beta->spectral_integral) : std::nullopt),
                          opt(beta ? std::optional<double>(beta->cutoff_boundary) : std::nullopt), opt(total),
                          opt(spectral ? std::optional<double>(spectral->value) : std::nullopt)});
  return o;
}

Outcome run_qi(const RunConfig& c) {
  const DensityProfile profile = qi_profile(c);
  std::vector<QIReport> rows(c.taus.size());
  parallel_for(rows.size(), [&](std::size_t i) { rows[i] = qi_row(profile, c.taus[i]); });
  const auto crit_closed = critical_tau(profile, BoundChoice::ClosedForm);
  const auto crit_quad = critical_tau(profile, BoundChoice::Quadrature);

  Outcome o;
  json reports = json::array();
  bool lhs_ok = true;
  double worst = 0.0;
  for (const auto& r : rows) {
    reports.push_back(qi_row_json(r));
    o.table.rows.push_back(qi_row_cells(r));
    // The weighted density lies between the well depth and zero.
    const bool ok = profile.eta > 0.0 ? (r.lhs < 0.0 && r.lhs > -profile.eta) : r.lhs == 0.0;
    lhs_ok = lhs_ok && ok;
    worst = std::max(worst, profile.eta > 0.0 ? -r.lhs / profile.eta : std::abs(r.lhs));
  }
  o.result = {{"eta", profile.eta},
              {"coupling", profile.coupling ? json(*profile.coupling) : json(nullptr)},
              {"critical_tau_closed_form", optional_number(crit_closed)},
              {"critical_tau_quadrature", optional_number(crit_quad)},
              {"reports", reports}};
  add_check(o.checks, "lhs_within_well", lhs_ok, worst, 1.0);
  o.table.columns = kQiColumns;
  return o;
}

Outcome run_sweep(const RunConfig& c) {
  const std::vector<double> grid = log_grid(c.grid_min, c.grid_max, c.grid_points);
  Outcome o;
  json rows = json::array();
  if (c.sweep_axis == SweepAxis::Coupling) {
    std::vector<EtaComponents> eta(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
      eta[i] = eta_components(PotentialSpec::from_coupling(grid[i], c.separation), c.tol);
    });
    bool monotone = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double strength = 2.0 * grid[i] / c.separation;
      rows.push_back({{"coupling", grid[i]},
                      {"lambda", strength},
                      {"eta1", eta[i].eta1},
                      {"eta2", eta[i].eta2},
                      {"region1_value", eta[i].sum()},
                      {"eta", 0.0 - eta[i].sum()}});
      o.table.rows.push_back({grid[i], strength, eta[i].eta1, eta[i].eta2, eta[i].sum(), 0.0 - eta[i].sum()});
      if (i > 0 && eta[i].sum() > eta[i - 1].sum()) monotone = false;
    }
    o.table.columns = {"coupling", "lambda", "eta1", "eta2", "region1_value", "eta"};
    // Observed property of the grid, reported rather than enforced.
    o.result = {{"axis", "coupling"}, {"region1_nonincreasing", monotone}, {"rows", rows}};
    return o;
  }

  const DensityProfile profile = qi_profile(c);
  std::vector<QIReport> reports(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { reports[i] = qi_row(profile, grid[i]); });
  for (const auto& r : reports) {
    rows.push_back(qi_row_json(r));
    o.table.rows.push_back(qi_row_cells(r));
  }
  o.table.columns = kQiColumns;
  o.result = {{"axis", "tau"},
              {"eta", profile.eta},
              {"critical_tau_closed_form", optional_number(critical_tau(profile, BoundChoice::ClosedForm))},
              {"critical_tau_quadrature", optional_number(critical_tau(profile, BoundChoice::Quadrature))},
              {"rows", rows}};
  return o;
}

json extrapolation_json(const Extrapolation& e) {
  return {{"limit", e.limit},       {"slope", e.slope},   {"residual", e.residual},
          {"exponent", finite_or_null(e.exponent)}, {"coefficient", finite_or_null(e.coefficient)},
          {"lengths", e.lengths},   {"values", e.values}, {"tail_bounds", e.tail_bounds}};
}

Outcome run_oracle(const RunConfig& c) {
  const PotentialSpec pot = PotentialSpec::make(c.strength, c.separation);
  const double a = c.separation;
  const double coupling = pot.coupling();
  const EtaComponents eta = eta_components(pot, c.tol);
  const std::optional<double> beta =
      coupling <= kMaxBetaCoupling ? std::optional<double>(beta_coefficient(pot, c.tol)) : std::nullopt;

  const Extrapolation inner = continuum_extrapolate(pot, c.box_lengths, 0.0);
  const Extrapolation outer = continuum_extrapolate(pot, c.box_lengths, 0.75 * a);

  const BoxSpec box = BoxSpec::make(c.box_length, pot);
  const int jump_modes = c.n_max.value_or(kDefaultJumpModes);
  const FiniteBoxRun jump_run = FiniteBoxRun::make(pot, box, jump_modes);
  const JumpReport jump = jump_consistency(jump_run);
  const FiniteBoxRun energy_run = FiniteBoxRun::make(pot, box, default_n_max(pot, box));
  const double energy = integrated_box_energy(energy_run);

  const BoxSpec shoot_box = BoxSpec::make(kShootingBox * a, pot);
  const std::vector<double> shot =
      shooting_extrapolated(pot, shoot_box, {a / 200.0, a / 400.0, a / 800.0}, kShootingModes);
  const std::vector<double> exact = lowest_frequencies(pot, shoot_box, kShootingModes);
  double shoot_err = 0.0;
  for (std::size_t k = 0; k < exact.size(); ++k) {
    shoot_err = std::max(shoot_err, std::abs(shot[k] - exact[k]) / exact[k]);
  }

  Outcome o;
  const double continuum = eta.sum();
  const double inner_err =
      continuum != 0.0 ? std::abs(inner.limit - continuum) / std::abs(continuum) : std::abs(inner.limit);
  add_check(o.checks, "region1_limit", inner_err <= 0.01, inner_err, 0.01);
  if (coupling > 0.0) {
    add_check(o.checks, "region2_inverse_length", std::abs(outer.exponent + 1.0) <= 0.1,
              outer.exponent, -1.0);
    if (beta) {
      const double slope_err = std::abs(outer.slope - *beta) / std::abs(*beta);
      add_check(o.checks, "region2_slope_vs_beta", slope_err <= 0.1, slope_err, 0.1);
    }
    const double outer_limit = std::abs(outer.limit) / std::abs(continuum);
    add_check(o.checks, "region2_vanishes", outer_limit <= 0.01, outer_limit, 0.01);
  } else {
    add_check(o.checks, "region2_vanishes", outer.limit == 0.0 && outer.slope == 0.0,
              std::abs(outer.limit) + std::abs(outer.slope), 0.0);
  }
  add_check(o.checks, "jump_per_mode", jump.max_relative_mismatch <= 1e-12, jump.max_relative_mismatch,
            1e-12);
  const double jump_gap = std::abs(jump.total_jump - jump.density_difference);
  add_check(o.checks, "jump_total", jump_gap <= 1e-13, jump_gap, 1e-13);
  add_check(o.checks, "integrated_energy_nonnegative", energy >= 0.0, energy, 0.0);
  add_check(o.checks, "shooting_agreement", shoot_err < 1e-6, shoot_err, 1e-6);

  o.result = {{"coupling", coupling},
              {"region1_continuum", continuum},
              {"beta", optional_number(beta)},
              {"region1", extrapolation_json(inner)},
              {"region2", extrapolation_json(outer)},
              {"jump",
               {{"L", box.length},
                {"n_max", jump_modes},
                {"total_jump", jump.total_jump},
                {"region1_sum", jump.region1_sum},
                {"region2_sum", jump.region2_sum},
                {"density_difference", jump.density_difference},
                {"max_relative_mismatch", jump.max_relative_mismatch}}},
              {"integrated_energy",
               {{"L", box.length}, {"n_max", energy_run.n_max()}, {"value", energy}}},
              {"shooting",
               {{"L", shoot_box.length},
                {"frequencies", shot},
                {"exact", exact},
                {"max_relative_error", shoot_err}}}};

  o.table.columns = {"L", "n_max", "region1", "region1_tail", "region2", "region2_tail"};
  for (std::size_t i = 0; i < inner.lengths.size(); ++i) {
    const double L = inner.lengths[i];
    const auto n = static_cast<long long>(default_n_max(pot, BoxSpec{L}));
    o.table.rows.push_back({L, n, inner.values[i], inner.tail_bounds[i], outer.values[i], outer.tail_bounds[i]});
  }
  return o;
}

Outcome run_modes(const RunConfig& c) {
  const PotentialSpec pot = PotentialSpec::make(c.strength, c.separation);
  const BoxSpec box = BoxSpec::make(c.box_length, pot);
  const int n_max = c.n_max.value_or(kDefaultModeCount);
  const std::vector<ModeSolution> modes = spectrum(pot, box, n_max, c.tol);
  std::vector<ModeResiduals> residuals(modes.size());
  parallel_for(modes.size(), [&](std::size_t i) {
    residuals[i] = validate_mode(modes[i], pot, box, NormCheck::Quadrature);
  });

  Outcome o;
  json rows = json::array();
  double worst = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const ModeSolution& m = modes[i];
    const ModeResiduals& r = residuals[i];
    worst = std::max(worst, r.max());
    rows.push_back({{"parity", parity_name(m.parity)},
                    {"n", m.index},
                    {"omega", m.frequency},
                    {"omega0", m.free_frequency},
                    {"amplitude", m.amplitude},
                    {"phase_shift", m.phase_shift},
                    {"norm_length", m.norm_length},
                    {"norm_factor", m.norm_factor},
                    {"norm_residual", r.norm},
                    {"continuity_residual", r.continuity},
                    {"jump_left_residual", r.jump_left},
                    {"jump_right_residual", r.jump_right},
                    {"boundary_residual", r.boundary}});
    o.table.rows.push_back({std::string(parity_name(m.parity)), static_cast<long long>(m.index), m.frequency,
                            m.free_frequency, m.amplitude, m.phase_shift, m.norm_length, m.norm_factor, r.norm,
                            r.continuity, r.jump_left, r.jump_right, r.boundary});
  }
  o.table.columns = {"parity", "n", "omega", "omega0", "amplitude", "phase_shift", "norm_length",
                     "norm_factor", "norm_residual", "continuity_residual", "jump_left_residual",
                     "jump_right_residual", "boundary_residual"};
  o.result = {{"coupling", pot.coupling()}, {"L", box.length}, {"n_max", n_max}, {"modes", rows}};
  add_check(o.checks, "mode_residuals", worst < 1e-10, worst, 1e-10);
  return o;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string cell_text(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string& s) const { return csv_escape(s); }
  };
  return std::visit(Visitor{}, cell);
}

Report error_report(const RunConfig& c, std::string_view kind, const std::string& message) {
  json doc;
  doc["command"] = command_name(c.command);
  doc["status"] = "error";
  doc["config"] = config_json(c);
  doc["error"] = {{"kind", kind}, {"message", message}};
  Report r;
  r.json = doc.dump(2) + "\n";
  r.config_lines = config_lines(c);
  r.checks_passed = false;
  return r;
}

// Non-positive (or negative, where zero is allowed) physical inputs are
// usage errors; the message names the parameter.
std::optional<std::string> validate_inputs(const RunConfig& c) {
  const auto bad = [](const std::string& name, double v, const char* need) {
    return name + " must be " + need + " (got " + format_double(v) + ")";
  };
  if (!(c.separation > 0.0) || !std::isfinite(c.separation)) return bad("a", c.separation, "positive");
  if (!(c.strength >= 0.0) || !std::isfinite(c.strength)) return bad("lambda", c.strength, "non-negative");
  if (!(c.box_length > 0.0) || !std::isfinite(c.box_length)) return bad("L", c.box_length, "positive");
  if (c.n_max && *c.n_max < 1) return bad("n-max", *c.n_max, "at least 1");
  if (c.taus.empty()) return std::string("tau needs at least one value");
  for (double t : c.taus) {
    if (!(t > 0.0) || !std::isfinite(t)) return bad("tau", t, "positive");
  }
  if (c.box_lengths.size() < 3) return std::string("Ls needs at least three box lengths");
  for (double l : c.box_lengths) {
    if (!(l > 0.0) || !std::isfinite(l)) return bad("Ls", l, "positive");
  }
  if (c.eta_depth && (!(*c.eta_depth >= 0.0) || !std::isfinite(*c.eta_depth))) {
    return bad("eta-depth", *c.eta_depth, "non-negative");
  }
  if (!(c.grid_min > 0.0)) return bad("grid-min", c.grid_min, "positive");
  if (!(c.grid_max >= c.grid_min) || !std::isfinite(c.grid_max)) {
    return bad("grid-max", c.grid_max, "finite and >= grid-min");
  }
  if (c.grid_points < 1) return bad("points", c.grid_points, "at least 1");
  if (!(c.tol.rel_tol > 0.0)) return bad("rel-tol", c.tol.rel_tol, "positive");
  if (!(c.tol.abs_tol > 0.0)) return bad("abs-tol", c.tol.abs_tol, "positive");
  if (c.tol.max_iter < 1) return bad("max-iter", c.tol.max_iter, "at least 1");
  return std::nullopt;
}

}  // namespace

ParseResult parse_config(int argc, const char* const* argv) {
  RunConfig c;
  CLI::App app{"Energy density and quantum-inequality checks for a pair of delta barriers", "qineq"};
  app.set_config("--config", "", "Read settings from a flat key = value file; flags take precedence");
  app.require_subcommand(1);

  double lambda = c.strength;
  double coupling = 0.0;
  double a = c.separation;
  double box_length = 0.0;
  int n_max = 0;
  double eta_depth = 0.0;
  std::string axis = "coupling";
  std::string format = "json";

  auto* lambda_opt = app.add_option("--lambda", lambda, "Delta strength lambda (inverse length)");
  auto* coupling_opt = app.add_option("--coupling", coupling, "Dimensionless coupling lambda*a/2");
  lambda_opt->excludes(coupling_opt);
  app.add_option("--a", a, "Barrier separation");
  auto* l_opt = app.add_option("--L", box_length, "Box length for oracle and modes (default 100 a)");
  auto* n_opt = app.add_option("--n-max", n_max, "Modes per parity (modes: 20, oracle jump check: 50)");
  auto* tau_opt = app.add_option("--tau", c.taus, "Lorentzian widths, comma separated")->delimiter(',');
  auto* ls_opt =
      app.add_option("--Ls", c.box_lengths, "Box lengths for the oracle fits (default 50,100,200 a)")
          ->delimiter(',');
  auto* depth_opt = app.add_option("--eta-depth", eta_depth, "Use a prescribed well depth eta for qi");
  app.add_option("--sweep-over", axis, "Sweep axis")->check(CLI::IsMember({"coupling", "tau"}));
  auto* min_opt = app.add_option("--grid-min", c.grid_min, "Smallest grid value");
  auto* max_opt = app.add_option("--grid-max", c.grid_max, "Largest grid value");
  app.add_option("--points", c.grid_points, "Number of logarithmically spaced grid points");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output", c.output_path, "Output file (default stdout)");
  app.add_flag("--normalize-a", c.normalize_a, "Compute in units where a = 1 and report in those units");
  app.add_option("--rel-tol", c.tol.rel_tol, "Relative quadrature tolerance");
  app.add_option("--abs-tol", c.tol.abs_tol, "Absolute quadrature tolerance");
  app.add_option("--max-iter", c.tol.max_iter, "Subdivision and iteration budget");
  app.set_version_flag("--version", kVersion);

  const std::pair<const char*, Command> subcommands[] = {
      {"density", Command::Density}, {"qi", Command::Qi}, {"sweep", Command::Sweep},
      {"oracle", Command::Oracle},   {"modes", Command::Modes}};
  const char* descriptions[] = {
      "Continuum energy density: eta1, eta2, beta and the total energy",
      "Lorentzian quantum-inequality check at the given widths",
      "Density or quantum-inequality values over a logarithmic grid",
      "Finite-box cross-checks of the continuum results",
      "Finite-box spectrum with per-mode residuals"};
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < 5; ++i) {
    subs.push_back(app.add_subcommand(subcommands[i].first, descriptions[i])->fallthrough());
  }

  ParseResult out;
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    std::ostringstream msg;
    if (dynamic_cast<const CLI::CallForVersion*>(&e) != nullptr) {
      msg << e.what() << "\n";
    } else {
      msg << app.help();
    }
    out.exit_code = 0;
    out.message = msg.str();
    return out;
  } catch (const CLI::ParseError& e) {
    out.exit_code = 2;
    out.message = std::string("error: ") + e.what() + "\nRun with --help for usage.\n";
    return out;
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (subs[i]->parsed()) c.command = subcommands[i].second;
  }
  if (coupling_opt->count() > 0) {
    if (!(a > 0.0)) {
      out.exit_code = 2;
      out.message = "error: a must be positive (got " + format_double(a) + ")\n";
      return out;
    }
    lambda = 2.0 * coupling / a;
  }
  c.strength = lambda;
  c.separation = a;
  c.box_length = l_opt->count() > 0 ? box_length : 100.0 * a;
  if (n_opt->count() > 0) c.n_max = n_max;
  if (ls_opt->count() == 0) c.box_lengths = {50.0 * a, 100.0 * a, 200.0 * a};
  if (depth_opt->count() > 0) c.eta_depth = eta_depth;
  (void)tau_opt;
  c.sweep_axis = axis == "tau" ? SweepAxis::Tau : SweepAxis::Coupling;
  if (c.sweep_axis == SweepAxis::Tau) {
    if (min_opt->count() == 0) c.grid_min = 0.1 * a;
    if (max_opt->count() == 0) c.grid_max = 100.0 * a;
  }
  c.format = format == "csv" ? Format::Csv : Format::Json;
  if (auto* cfg = app.get_config_ptr(); cfg != nullptr && cfg->count() > 0) {
    c.config_path = cfg->as<std::string>();
  }

  if (auto problem = validate_inputs(c)) {
    out.exit_code = 2;
    out.message = "error: " + *problem + "\n";
    return out;
  }
  out.config = c;
  return out;
}

Report build_report(const RunConfig& config) {
  const RunConfig c = config.normalize_a ? in_units_of_a(config) : config;
  c.tol.validate();
  Outcome o;
  switch (c.command) {
    case Command::Density: o = run_density(c); break;
    case Command::Qi: o = run_qi(c); break;
    case Command::Sweep: o = run_sweep(c); break;
    case Command::Oracle: o = run_oracle(c); break;
    case Command::Modes: o = run_modes(c); break;
  }
  const bool pass = all_checks_pass(o.checks);
  json doc;
  doc["command"] = command_name(config.command);
  doc["status"] = pass ? "ok" : "check_failed";
  doc["config"] = config_json(config);
  doc["units"] = config.normalize_a ? "a" : "input";
  doc["result"] = std::move(o.result);
  doc["checks"] = std::move(o.checks);

  Report r;
  r.json = doc.dump(2) + "\n";
  r.table = std::move(o.table);
  r.config_lines = config_lines(config);
  r.checks_passed = pass;
  return r;
}

std::string to_csv(const Report& report) {
  std::string s;
  for (const auto& line : report.config_lines) s += "# " + line + "\n";
  for (std::size_t i = 0; i < report.table.columns.size(); ++i) {
    if (i) s += ',';
    s += csv_escape(report.table.columns[i]);
  }
  s += '\n';
  for (const auto& row : report.table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) s += ',';
      s += cell_text(row[i]);
    }
    s += '\n';
  }
  return s;
}

void emit(const Report& report, Format format, const std::string& path, std::ostream& out) {
  // Error reports have no table and are always written as JSON.
  const bool as_json = format == Format::Json || report.table.columns.empty();
  const std::string text = as_json ? report.json : to_csv(report);
  if (path.empty()) {
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("cannot write to standard output");
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open output file '" + path + "'");
  file << text;
  file.close();
  if (!file) throw std::runtime_error("cannot write output file '" + path + "'");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Report report;
  try {
    report = build_report(config);
  } catch (const Error& e) {
    report = error_report(config, to_string(e.kind()), e.what());
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    report = error_report(config, "internal", e.what());
    err << "error: " << e.what() << "\n";
  }
  try {
    emit(report, config.format, config.output_path, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  if (!report.checks_passed && report.table.columns.size() > 0) {
    err << "one or more checks failed\n";
  }
  return report.checks_passed ? 0 : 1;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const ParseResult parsed = parse_config(argc, argv);
  if (!parsed.config) {
    (parsed.exit_code == 0 ? out : err) << parsed.message;
    return parsed.exit_code;
  }
  return run(*parsed.config, out, err);
}

}  // namespace qineq::cli
