#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qineq/numerics.hpp"

namespace qineq::cli {

enum class Command { Density, Qi, Sweep, Oracle, Modes };
enum class Format { Json, Csv };
enum class SweepAxis { Coupling, Tau };

struct RunConfig {
  Command command = Command::Density;
  double strength = 2.0;    // lambda
  double separation = 1.0;  // a
  double box_length = 100.0;                        // defaults to 100 a
  std::optional<int> n_max;
  std::vector<double> taus = {10.0};
  std::vector<double> box_lengths = {50.0, 100.0, 200.0};  // defaults to {50, 100, 200} a
  std::optional<double> eta_depth;  // qi on a prescribed well instead of a potential
  SweepAxis sweep_axis = SweepAxis::Coupling;
  double grid_min = 0.01;
  double grid_max = 1e3;
  int grid_points = 25;
  Format format = Format::Json;
  std::string output_path;  // empty: stdout
  std::string config_path;
  bool normalize_a = false;
  Tolerances tol;

  double coupling() const { return strength * separation / 2.0; }
};

struct ParseResult {
  std::optional<RunConfig> config;  // set when the run should proceed
  int exit_code = 0;                // meaningful when config is empty
  std::string message;              // help or usage text
};

/// Parses argv (flags override values read from --config). Never throws;
/// usage errors come back with exit_code 2 and the message to print.
ParseResult parse_config(int argc, const char* const* argv);

using Cell = std::variant<std::monostate, bool, long long, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// A finished report: the JSON document and its tabular (CSV) view.
struct Report {
  std::string json;
  Table table;
  std::vector<std::string> config_lines;  // "key = value", written as CSV comments
  bool checks_passed = true;
};

/// Computes the report for a configuration. Library errors propagate.
Report build_report(const RunConfig& config);

/// Runs the configured command and writes the report to config.output_path
/// (or `out` when empty). Library failures become a JSON error object and
/// exit code 1; failed checks also give 1.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Serializes a report to path, or to out when path is empty. Throws
/// std::runtime_error when the path cannot be written.
void emit(const Report& report, Format format, const std::string& path, std::ostream& out);

/// CSV rendering used by emit(); numbers at 17 significant digits.
std::string to_csv(const Report& report);

/// Full entry point used by the executable.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qineq::cli
