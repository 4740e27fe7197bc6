#include "qineq/modes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qineq/errors.hpp"

namespace qineq {

namespace {

constexpr double kPi = std::numbers::pi;

// Residual threshold applied to every mode returned by spectrum().
constexpr double kModeResidualLimit = 1e-10;

struct Trig {
  double s;
  double c;
  double g;  // coupling / Omega
};

Trig trig_at(double omega, const PotentialSpec& pot) {
  const double half_phase = omega * pot.separation / 2.0;
  return {std::sin(half_phase), std::cos(half_phase), pot.coupling() / half_phase};
}

void require_positive_frequency(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw Error(ErrorKind::InvalidFrequency,
                "frequency must be positive and finite, got " + std::to_string(omega));
  }
}

double mode_scale(const ModeSolution& mode, const BoxSpec& box) {
  return mode.norm_factor / std::sqrt(mode.frequency * box.length);
}

// Closed-form u and u' of one region's formula, without range checks.
ModeValue region_value(const ModeSolution& mode, double scale, double x, Region region) {
  const double w = mode.frequency;
  if (region == Region::Inner) {
    const double k = scale * mode.amplitude;
    if (mode.parity == Parity::Odd) {
      return {k * std::sin(w * x), k * w * std::cos(w * x)};
    }
    return {k * std::cos(w * x), -k * w * std::sin(w * x)};
  }
  const double arg = w * x + side_sign(x) * mode.phase_shift;
  if (mode.parity == Parity::Odd) {
    return {scale * std::sin(arg), scale * w * std::cos(arg)};
  }
  return {scale * std::cos(arg), -scale * w * std::sin(arg)};
}

}  // namespace

PotentialSpec PotentialSpec::make(double strength, double separation) {
  if (!(strength >= 0.0) || !std::isfinite(strength)) {
    throw Error(ErrorKind::InvalidArgument, "delta strength must be finite and >= 0");
  }
  if (!(separation > 0.0) || !std::isfinite(separation)) {
    throw Error(ErrorKind::InvalidArgument, "separation must be finite and > 0");
  }
  return {strength, separation};
}

PotentialSpec PotentialSpec::from_coupling(double coupling, double separation) {
  if (!(separation > 0.0) || !std::isfinite(separation)) {
    throw Error(ErrorKind::InvalidArgument, "separation must be finite and > 0");
  }
  return make(2.0 * coupling / separation, separation);
}

BoxSpec BoxSpec::make(double length, const PotentialSpec& pot) {
  if (!(length >= 10.0 * pot.separation) || !std::isfinite(length)) {
    throw Error(ErrorKind::BoxTooSmall, "box length " + std::to_string(length) +
                                            " is below 10x the barrier separation");
  }
  return {length};
}

double ModeResiduals::max() const {
  return std::max({norm, continuity, jump_left, jump_right, boundary});
}

ScatteringData scattering_data(Parity parity, double omega, const PotentialSpec& pot) {
  require_positive_frequency(omega);
  if (pot.coupling() == 0.0) return {1.0, 0.0};
  const auto [s, c, g] = trig_at(omega, pot);
  if (parity == Parity::Odd) {
    const double outer = g * s + c;
    return {1.0 / std::sqrt(s * s + outer * outer), std::atan2(-g * s * s, 1.0 + g * s * c)};
  }
  const double outer = g * c - s;
  return {1.0 / std::sqrt(c * c + outer * outer), std::atan2(-g * c * c, 1.0 - g * s * c)};
}

double amplitude_sq_minus_one(Parity parity, double omega, const PotentialSpec& pot) {
  require_positive_frequency(omega);
  if (pot.coupling() == 0.0) return 0.0;
  const auto [s, c, g] = trig_at(omega, pot);
  const double amp = scattering_data(parity, omega, pot).amplitude;
  if (parity == Parity::Odd) {
    return -amp * amp * g * s * (2.0 * c + g * s);
  }
  return amp * amp * g * c * (2.0 * s - g * c);
}

double normalization_deficit(Parity parity, double omega, const PotentialSpec& pot) {
  require_positive_frequency(omega);
  if (pot.coupling() == 0.0) return 0.0;
  const ScatteringData sc = scattering_data(parity, omega, pot);
  const double a = pot.separation;
  const double amp_sq = sc.amplitude * sc.amplitude;
  const double edge_term =
      (amp_sq * std::sin(omega * a) - std::sin(omega * a + 2.0 * sc.phase_shift)) / omega;
  return -a * amplitude_sq_minus_one(parity, omega, pot) +
         (parity == Parity::Odd ? edge_term : -edge_term);
}

Normalization normalization_data(Parity parity, double omega, const PotentialSpec& pot,
                                 const BoxSpec& box) {
  const double deficit = normalization_deficit(parity, omega, pot);
  if (!(deficit < box.length)) {
    throw Error(ErrorKind::BoxTooSmall, "normalization deficit " + std::to_string(deficit) +
                                            " reaches the box length");
  }
  return {deficit, 1.0 / std::sqrt(1.0 - deficit / box.length)};
}

double free_frequency(Parity parity, int index, const BoxSpec& box) {
  if (index < 1) throw Error(ErrorKind::InvalidArgument, "mode index must be >= 1");
  const double n = parity == Parity::Odd ? index : index - 0.5;
  return 2.0 * kPi * n / box.length;
}

FreeMode free_mode(Parity parity, int index, const BoxSpec& box) {
  return {parity, index, free_frequency(parity, index, box)};
}

ModeSolution solve_mode(Parity parity, int index, const PotentialSpec& pot, const BoxSpec& box,
                        const Tolerances& tol) {
  tol.validate();
  const double w0 = free_frequency(parity, index, box);
  const double L = box.length;
  double w = w0;
  bool converged = pot.coupling() == 0.0;
  if (!converged) {
    const double step_limit = 1e-12 / pot.separation;
    for (int iter = 0; iter < tol.max_iter; ++iter) {
      const double next = w0 - 2.0 * scattering_data(parity, w, pot).phase_shift / L;
      const double step = std::abs(next - w);
      w = next;
      if (step < step_limit) {
        converged = true;
        break;
      }
    }
  }
  if (!converged) {
    // The phase lies in (-pi, 0], so the quantization residual is <= 0 at
    // w0 and > 0 one level spacing above it.
    const auto residual = [&](double x) {
      return x - w0 + 2.0 * scattering_data(parity, x, pot).phase_shift / L;
    };
    try {
      w = solve_root(residual, w0, w0 + 2.0 * kPi / L, {1e-15, 1e-15 * w0, 400});
    } catch (const Error&) {
      throw Error(ErrorKind::EigenvalueSolveFailure,
                  "no eigenfrequency for parity " + std::to_string(static_cast<int>(parity)) +
                      ", index " + std::to_string(index));
    }
  }

  const ScatteringData sc = scattering_data(parity, w, pot);
  const Normalization norm = normalization_data(parity, w, pot, box);
  return {parity, index, w, w0, sc.amplitude, sc.phase_shift, norm.length, norm.factor};
}

std::vector<ModeSolution> spectrum(const PotentialSpec& pot, const BoxSpec& box, int n_max,
                                   const Tolerances& tol) {
  if (n_max < 1) throw Error(ErrorKind::InvalidArgument, "n_max must be >= 1");
  std::vector<ModeSolution> modes;
  modes.reserve(2 * static_cast<std::size_t>(n_max));
  for (Parity parity : {Parity::Odd, Parity::Even}) {
    double previous = 0.0;
    for (int n = 1; n <= n_max; ++n) {
      ModeSolution mode = solve_mode(parity, n, pot, box, tol);
      const ModeResiduals r = validate_mode(mode, pot, box, NormCheck::Antiderivative);
      if (!(mode.frequency > previous) || !(r.max() < kModeResidualLimit)) {
        throw Error(ErrorKind::EigenvalueSolveFailure,
                    "mode (parity " + std::to_string(static_cast<int>(parity)) + ", index " +
                        std::to_string(n) + ") failed validation, max residual " +
                        std::to_string(r.max()));
      }
      previous = mode.frequency;
      modes.push_back(mode);
    }
  }
  return modes;
}

ModeValue mode_eval(const ModeSolution& mode, const PotentialSpec& pot, const BoxSpec& box,
                    double x, Side side) {
  const double half_box = box.length / 2.0;
  if (!(std::abs(x) <= half_box * (1.0 + 1e-14))) {
    throw Error(ErrorKind::OutsideBox, "x = " + std::to_string(x) + " lies outside the box");
  }
  const double scale = mode_scale(mode, box);
  const double edge = pot.separation / 2.0;
  const double ax = std::abs(x);
  if (ax < edge) return region_value(mode, scale, x, Region::Inner);
  if (ax > edge) return region_value(mode, scale, x, Region::Outer);
  ModeValue v = region_value(mode, scale, x, Region::Inner);
  if (side == Side::Outer) v.derivative = region_value(mode, scale, x, Region::Outer).derivative;
  return v;
}

double mode_density(const ModeSolution& mode, const BoxSpec& box, Region region) {
  const double n2 = mode.norm_factor * mode.norm_factor;
  const double base = n2 * mode.frequency / (2.0 * box.length);
  return region == Region::Inner ? base * mode.amplitude * mode.amplitude : base;
}

double mode_density(const FreeMode& mode, const BoxSpec& box) {
  return mode.frequency / (2.0 * box.length);
}

ModeResiduals validate_mode(const ModeSolution& mode, const PotentialSpec& pot, const BoxSpec& box,
                            NormCheck check) {
  const double w = mode.frequency;
  const double scale = mode_scale(mode, box);
  const double edge = pot.separation / 2.0;
  const double half_box = box.length / 2.0;
  const double lambda = pot.strength;

  // u^2 is even for both parities, so integrate over x >= 0 and double.
  double half_integral = 0.0;
  if (check == NormCheck::Quadrature) {
    const auto square = [&](Region region) {
      return [&, region](double x) {
        const double u = region_value(mode, scale, x, region).value;
        return u * u;
      };
    };
    const double half_period = kPi / w;
    const auto panel_edges = [&](double lo, double hi) {
      const auto count = static_cast<std::size_t>(std::max(1.0, std::ceil((hi - lo) / half_period)));
      std::vector<double> edges(count + 1);
      for (std::size_t i = 0; i <= count; ++i) {
        edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count);
      }
      return edges;
    };
    const Tolerances quad_tol{1e-13, 1e-15 / w, 200};
    half_integral = integrate_panels(square(Region::Inner), panel_edges(0.0, edge), quad_tol).value +
                    integrate_panels(square(Region::Outer), panel_edges(edge, half_box), quad_tol).value;
  } else {
    const double sign = mode.parity == Parity::Odd ? -1.0 : 1.0;
    const double amp_sq = mode.amplitude * mode.amplitude;
    const auto inner = [&](double x) { return x / 2.0 + sign * std::sin(2.0 * w * x) / (4.0 * w); };
    const auto outer = [&](double x) {
      return x / 2.0 + sign * std::sin(2.0 * w * x + 2.0 * mode.phase_shift) / (4.0 * w);
    };
    half_integral = scale * scale * (amp_sq * (inner(edge) - inner(0.0)) + outer(half_box) - outer(edge));
  }

  ModeResiduals r;
  r.norm = std::abs(2.0 * w * 2.0 * half_integral - 1.0);

  const ModeValue right_in = region_value(mode, scale, edge, Region::Inner);
  const ModeValue right_out = region_value(mode, scale, edge, Region::Outer);
  const ModeValue left_in = region_value(mode, scale, -edge, Region::Inner);
  const ModeValue left_out = region_value(mode, scale, -edge, Region::Outer);
  r.continuity = std::max(std::abs(right_in.value - right_out.value),
                          std::abs(left_in.value - left_out.value)) /
                 scale;
  const double jump_scale = scale * (w + lambda);
  r.jump_right =
      std::abs(right_out.derivative - right_in.derivative - lambda * right_in.value) / jump_scale;
  r.jump_left =
      std::abs(left_in.derivative - left_out.derivative - lambda * left_in.value) / jump_scale;
  r.boundary = std::max(std::abs(region_value(mode, scale, half_box, Region::Outer).value),
                        std::abs(region_value(mode, scale, -half_box, Region::Outer).value)) /
               scale;
  return r;
}

}  // namespace qineq
