#pragma once

#include <optional>

#include "qineq/modes.hpp"
#include "qineq/numerics.hpp"

namespace qineq {

/// The two pieces of the constant energy density between the barriers, in
/// units of 1/length^2.
struct EtaComponents {
  double eta1 = 0.0;  ///< odd-parity part, <= 0
  double eta2 = 0.0;  ///< even-parity part, >= 0

  double sum() const { return eta1 + eta2; }
};

/// Rotated-contour integrals for eta1 and eta2, written in the overflow-free
/// form y e^{-2y} / (y + coupling (1 -+ e^{-2y}) / 2).
///
/// Throws InvariantViolation if the signs come out wrong (eta1 <= 0 <= eta2,
/// eta1 + eta2 <= 0); quadrature failures propagate.
EtaComponents eta_components(const PotentialSpec& pot, const Tolerances& tol = {1e-12, 1e-15, 400});

/// Region-I density from the real-frequency integral
/// (1/4pi) int (A1^2 + A2^2 - 2) omega d omega.
///
/// The head [0, omega_start'] is integrated adaptively with breakpoints on a
/// quarter-period grid and around the narrow resonances; the tail is
/// period-averaged. omega_start' is omega_start moved up so that omega*a/2
/// is a multiple of pi/2 and at least twice the coupling.
///
/// Throws InvalidArgument if omega_start < 20/a.
QuadratureResult region1_density_spectral(const PotentialSpec& pot, double omega_start,
                                          const Tolerances& tol = {});

/// The two contributions to the region-II coefficient.
struct BetaParts {
  /// (1/4pi) int sum_j omega (B_j + 2 d delta_j / d omega) d omega,
  /// with the derivative by central differences.
  double spectral_integral = 0.0;
  /// Cutoff term left over from pairing interacting and free modes by
  /// index rather than by frequency: -(1/2pi) lim W sum_j delta_j(W).
  double cutoff_boundary = 0.0;

  double value() const { return spectral_integral + cutoff_boundary; }
};

/// Largest coupling the beta quadrature accepts. The number of resonances
/// it has to resolve grows linearly with the coupling.
inline constexpr double kMaxBetaCoupling = 1e3;

/// Throws InvalidArgument for coupling > kMaxBetaCoupling.
BetaParts beta_components(const PotentialSpec& pot, const Tolerances& tol = {});

/// Region-II coefficient beta (units 1/length): the finite-box density
/// outside the barriers is beta/L + O(1/L^2).
double beta_coefficient(const PotentialSpec& pot, const Tolerances& tol = {});

/// Piecewise-constant continuum density: region1_value between the
/// barriers, zero outside.
struct DensityProfile {
  double eta1 = 0.0;
  double eta2 = 0.0;
  double region1_value = 0.0;  ///< eta1 + eta2
  double eta = 0.0;            ///< -(eta1 + eta2)
  std::optional<double> beta;  ///< absent for surrogate profiles
  double separation = 1.0;
  std::optional<double> coupling;  ///< absent for surrogate profiles

  /// Profile with a prescribed depth eta and no underlying potential. Used
  /// to study a given well without solving for it (e.g. the plate limit).
  static DensityProfile from_depth(double eta, double separation);

  /// Throws SingularPoint exactly on a barrier.
  double at(double x) const;

  /// beta - eta*a. Throws InvalidArgument when beta is absent.
  double total_energy() const;
};

/// Full profile; beta is left empty when the coupling exceeds
/// kMaxBetaCoupling.
DensityProfile density_profile(const PotentialSpec& pot, const Tolerances& tol = {});

/// Same as density_profile() without the (comparatively costly) beta.
DensityProfile density_profile_without_beta(const PotentialSpec& pot, const Tolerances& tol = {});

}  // namespace qineq
