#pragma once

#include <vector>

#include "qineq/modes.hpp"

namespace qineq {

/// A solved finite box: the interacting modes and the free modes they are
/// paired with, both ordered by (parity, index). Immutable once built.
class FiniteBoxRun {
 public:
  /// Solves both parities for n = 1..n_max. Every mode is checked with the
  /// O(1) residuals; NormCheck::Quadrature additionally integrates u^2 over
  /// the box for each mode (slow for large boxes).
  ///
  /// Throws EigenvalueSolveFailure when a mode misses the 1e-10 residual
  /// threshold.
  static FiniteBoxRun make(const PotentialSpec& pot, const BoxSpec& box, int n_max,
                           NormCheck validation = NormCheck::Antiderivative);

  const PotentialSpec& potential() const { return pot_; }
  const BoxSpec& box() const { return box_; }
  int n_max() const { return n_max_; }
  const std::vector<ModeSolution>& modes() const { return modes_; }
  const std::vector<FreeMode>& free_modes() const { return free_modes_; }

  /// Interacting mode (parity, n); n is 1-based.
  const ModeSolution& mode(Parity parity, int n) const;

 private:
  FiniteBoxRun() = default;

  PotentialSpec pot_;
  BoxSpec box_;
  int n_max_ = 0;
  std::vector<ModeSolution> modes_;
  std::vector<FreeMode> free_modes_;
};

/// Default mode count for a box: ceil(40 L / a) per parity, which keeps
/// the frequency cutoff near 80 pi / a whatever the box size.
int default_n_max(const PotentialSpec& pot, const BoxSpec& box, double cutoff_factor = 40.0);

struct ModeSum {
  double value = 0.0;          ///< mean of the last ceil(n_max/10) partial sums
  double tail_bound = 0.0;     ///< spread (max - min) of those partial sums
  double truncated_sum = 0.0;  ///< plain partial sum at n_max
};

/// Mode-renormalized density sum_{j,n} (T_jn(x) - T0_jn) using the per-mode
/// region constants.
///
/// Throws SingularPoint within 1e-9 a of a barrier and OutsideBox beyond
/// the walls.
ModeSum finite_box_density(const FiniteBoxRun& run, double x);

/// Same sum, but each mode's density is built pointwise from mode_eval as
/// (omega^2 u^2 + u'^2)/2 rather than taken from the closed-form constant.
ModeSum pointwise_box_density(const FiniteBoxRun& run, double x);

/// max |pointwise density(x) - pointwise density(xs[0])| over xs. All points
/// must lie strictly inside one region (InvalidArgument otherwise).
double density_flatness_check(const FiniteBoxRun& run, const std::vector<double>& xs);

struct Extrapolation {
  double limit = 0.0;     ///< intercept of value = limit + slope / L
  double slope = 0.0;
  double residual = 0.0;  ///< rms deviation from the fitted line
  /// Least-squares exponent p of |value| ~ C L^p, and C; NaN when the
  /// values change sign or vanish.
  double exponent = 0.0;
  double coefficient = 0.0;
  std::vector<double> lengths;
  std::vector<double> values;
  std::vector<double> tail_bounds;
};

/// Runs finite_box_density at x for each box length with n_max =
/// ceil(cutoff_factor * L / a) and fits value = limit + slope/L.
///
/// Throws InvalidArgument for fewer than three distinct lengths and
/// NonInverseLengthBehavior when the fit residual exceeds 10% of the spread
/// of the values.
Extrapolation continuum_extrapolate(const PotentialSpec& pot, const std::vector<double>& lengths,
                                    double x, double cutoff_factor = 40.0);

struct ModeJump {
  Parity parity = Parity::Odd;
  int index = 1;
  /// (lambda/2) u(-a/2) [u'(-a/2; outer) + u'(-a/2; inner)]
  double delta_t_direct = 0.0;
  /// omega N^2 (A^2 - 1) / (2L)
  double delta_t_closed = 0.0;
};

struct JumpReport {
  std::vector<ModeJump> per_mode;
  double total_jump = 0.0;          ///< sum of delta_t_direct
  double region1_sum = 0.0;         ///< truncated renormalized sum inside
  double region2_sum = 0.0;         ///< truncated renormalized sum outside
  double density_difference = 0.0;  ///< region1_sum - region2_sum
  double max_relative_mismatch = 0.0;  ///< max over modes of |direct - closed| / |closed|
};

JumpReport jump_consistency(const FiniteBoxRun& run);

/// Energy of the box relative to the free field: inner density * a plus
/// outer density * (L - a), both from finite_box_density.
double integrated_box_energy(const FiniteBoxRun& run);

struct ShootingMode {
  double omega = 0.0;
  Parity parity = Parity::Odd;
  int nodes = 0;  ///< interior zeros of the eigenfunction
};

/// Eigenfrequencies of -u'' + U u = omega^2 u with Dirichlet walls, the
/// deltas replaced by square barriers of height lambda/width. Marches from
/// -L/2 with RK4 on a grid aligned to the barrier edges; the step count is
/// doubled until no eigenvalue moves by more than 1e-8 relative.
///
/// Throws InvalidArgument unless 0 < barrier_width <= a/100 and
/// SpectrumGap when the k-th root does not have k-1 nodes.
std::vector<ShootingMode> shooting_spectrum(const PotentialSpec& pot, const BoxSpec& box,
                                            double barrier_width, int k_max);

/// Quadratic extrapolation to zero width through three shooting runs;
/// returns the k_max lowest frequencies.
std::vector<double> shooting_extrapolated(const PotentialSpec& pot, const BoxSpec& box,
                                          const std::vector<double>& widths, int k_max);

/// The k_max lowest frequencies from spectrum(), both parities merged.
std::vector<double> lowest_frequencies(const PotentialSpec& pot, const BoxSpec& box, int k_max);

}  // namespace qineq
