#pragma once

#include <vector>

#include "qineq/numerics.hpp"

namespace qineq {

/// Symmetric pair of delta barriers of the given strength, centred at
/// +-separation/2.
struct PotentialSpec {
  double strength = 0.0;    ///< delta strength (inverse length), >= 0
  double separation = 1.0;  ///< distance between the barriers, > 0

  /// Validated constructor; throws InvalidArgument on a negative strength
  /// or a non-positive separation.
  static PotentialSpec make(double strength, double separation);
  /// Builds the potential from the dimensionless coupling
  /// strength*separation/2.
  static PotentialSpec from_coupling(double coupling, double separation);

  /// Dimensionless coupling strength*separation/2.
  double coupling() const { return strength * separation / 2.0; }
};

/// Periodic-mode quantization box [-length/2, length/2] with Dirichlet walls.
struct BoxSpec {
  double length = 100.0;

  /// Throws BoxTooSmall unless length >= 10*separation.
  static BoxSpec make(double length, const PotentialSpec& pot);
};

/// Odd (sine-like) and even (cosine-like) branches of the symmetric problem.
enum class Parity : int { Odd = 1, Even = 2 };

/// Region I lies between the barriers, region II outside them.
enum class Region { Inner, Outer };

/// Which one-sided derivative to report exactly on a barrier.
enum class Side { Inner, Outer };

struct ScatteringData {
  double amplitude = 1.0;    ///< inner amplitude relative to the outer wave, > 0
  double phase_shift = 0.0;  ///< radians, continuous branch in (-pi, 0]
};

struct Normalization {
  double length = 0.0;  ///< normalization deficit B (same units as length)
  double factor = 1.0;  ///< N = (1 - B/L)^(-1/2)
};

struct FreeMode {
  Parity parity = Parity::Odd;
  int index = 1;
  double frequency = 0.0;
};

struct ModeSolution {
  Parity parity = Parity::Odd;
  int index = 1;
  double frequency = 0.0;     ///< interacting eigenfrequency
  double free_frequency = 0.0;  ///< unperturbed frequency with the same index
  double amplitude = 1.0;
  double phase_shift = 0.0;
  double norm_length = 0.0;
  double norm_factor = 1.0;
};

struct ModeValue {
  double value = 0.0;
  double derivative = 0.0;
};

struct ModeResiduals {
  double norm = 0.0;        ///< |2*omega*int u^2 - 1|
  double continuity = 0.0;  ///< max mismatch of u across the barriers, relative to the mode scale
  double jump_left = 0.0;   ///< derivative-jump condition at -separation/2
  double jump_right = 0.0;  ///< derivative-jump condition at +separation/2
  double boundary = 0.0;    ///< |u(+-L/2)| relative to the mode scale

  double max() const;
};

/// How validate_mode obtains the normalization integral.
enum class NormCheck {
  Quadrature,      ///< adaptive quadrature of u^2 over the whole box
  Antiderivative,  ///< closed-form antiderivative of each piece, O(1) cost
};

/// Inner amplitude and phase shift of the scattering solution at frequency
/// omega. The phase is atan2 of the numerator/denominator pair of the
/// tangent formula; it is continuous in omega, lies in (-pi, 0] and
/// vanishes for zero coupling.
///
/// Throws InvalidFrequency when omega <= 0.
ScatteringData scattering_data(Parity parity, double omega, const PotentialSpec& pot);

/// amplitude^2 - 1 without the cancellation of computing the square first.
double amplitude_sq_minus_one(Parity parity, double omega, const PotentialSpec& pot);

/// Normalization deficit B of the scattering solution (length units). It
/// does not depend on the box.
double normalization_deficit(Parity parity, double omega, const PotentialSpec& pot);

/// Throws BoxTooSmall when the deficit reaches the box length.
Normalization normalization_data(Parity parity, double omega, const PotentialSpec& pot,
                                 const BoxSpec& box);

double free_frequency(Parity parity, int index, const BoxSpec& box);
FreeMode free_mode(Parity parity, int index, const BoxSpec& box);

/// Solves the quantization condition for one (parity, index) pair:
/// fixed-point iteration seeded at the free frequency, falling back to a
/// bracketed root on [omega0, omega0 + 2*pi/L].
ModeSolution solve_mode(Parity parity, int index, const PotentialSpec& pot, const BoxSpec& box,
                        const Tolerances& tol = {});

/// All modes with index 1..n_max for both parities, ordered by (parity,
/// index). Every mode is checked with the O(1) residuals before return.
std::vector<ModeSolution> spectrum(const PotentialSpec& pot, const BoxSpec& box, int n_max,
                                   const Tolerances& tol = {});

/// u and du/dx at x. Exactly on a barrier the value is the (continuous)
/// inner limit and the derivative is taken from the requested side.
///
/// Throws OutsideBox for |x| > L/2.
ModeValue mode_eval(const ModeSolution& mode, const PotentialSpec& pot, const BoxSpec& box,
                    double x, Side side = Side::Inner);

/// Per-mode kinetic energy density, which is piecewise constant in x.
double mode_density(const ModeSolution& mode, const BoxSpec& box, Region region);
double mode_density(const FreeMode& mode, const BoxSpec& box);

ModeResiduals validate_mode(const ModeSolution& mode, const PotentialSpec& pot, const BoxSpec& box,
                            NormCheck check = NormCheck::Quadrature);

/// Sign convention used for the outer phase: +1 for x >= 0, -1 otherwise.
inline double side_sign(double x) { return x >= 0.0 ? 1.0 : -1.0; }

}  // namespace qineq
