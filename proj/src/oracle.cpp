#include "qineq/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qineq/errors.hpp"

namespace qineq {

namespace {

constexpr double kPi = std::numbers::pi;

Region region_of(const FiniteBoxRun& run, double x) {
  const double a = run.potential().separation;
  const double half_box = run.box().length / 2.0;
  if (!(std::abs(x) <= half_box)) {
    throw Error(ErrorKind::OutsideBox, "x = " + std::to_string(x) + " lies outside the box");
  }
  if (std::abs(std::abs(x) - a / 2.0) <= 1e-9 * a) {
    throw Error(ErrorKind::SingularPoint, "x = " + std::to_string(x) + " sits on a barrier");
  }
  return std::abs(x) < a / 2.0 ? Region::Inner : Region::Outer;
}

// Adds the per-index terms in order and averages the last tenth of the
// partial sums.
template <typename Term>
ModeSum averaged_mode_sum(const FiniteBoxRun& run, Term term) {
  const int n_max = run.n_max();
  const int window = std::max(1, (n_max + 9) / 10);
  CompensatedSum partial;
  CompensatedSum mean;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int n = 1; n <= n_max; ++n) {
    for (Parity parity : {Parity::Odd, Parity::Even}) partial.add(term(parity, n));
    if (n > n_max - window) {
      const double s = partial.value();
      mean.add(s);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
  }
  return {mean.value() / window, hi - lo, partial.value()};
}

const FreeMode& free_of(const FiniteBoxRun& run, Parity parity, int n) {
  const std::size_t offset = parity == Parity::Odd ? 0 : static_cast<std::size_t>(run.n_max());
  return run.free_modes()[offset + static_cast<std::size_t>(n - 1)];
}

// One RK4 step of u'' = q u is a fixed linear map for constant q.
struct StepMatrix {
  double m00, m01, m10, m11;
};

StepMatrix rk4_matrix(double q, double h) {
  // Taylor polynomial of exp(h M), M = [[0, 1], [q, 0]], through fourth order.
  const double z = q * h * h;
  const double even = 1.0 + z / 2.0 + z * z / 24.0;
  const double odd = h * (1.0 + z / 6.0);
  return {even, odd, q * odd, even};
}

struct Segment {
  double lo;
  double hi;
  double potential;
};

struct ShotResult {
  double end_value;
  double end_slope;
  int interior_nodes;  ///< sign changes strictly inside the box
  int zeros;           ///< zeros in (-L/2, L/2], i.e. including the far wall
};

class Shooter {
 public:
  Shooter(const PotentialSpec& pot, const BoxSpec& box, double width) {
    const double a = pot.separation;
    const double half = box.length / 2.0;
    const double height = pot.strength / width;
    const std::array<double, 6> edges = {-half,           -a / 2.0 - width / 2.0, -a / 2.0 + width / 2.0,
                                         a / 2.0 - width / 2.0, a / 2.0 + width / 2.0, half};
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      segments_.push_back({edges[i], edges[i + 1], (i == 1 || i == 3) ? height : 0.0});
    }
    half_box_ = half;
  }

  ShotResult shoot(double omega, int steps_per_half) const {
    const double target_step = half_box_ / steps_per_half;
    double u = 0.0;
    double v = 1.0;
    int changes = 0;
    bool changed_on_last_step = false;
    double previous = 0.0;
    for (const Segment& seg : segments_) {
      const double length = seg.hi - seg.lo;
      const int steps = std::max(2, static_cast<int>(std::ceil(length / target_step)));
      const StepMatrix m = rk4_matrix(seg.potential - omega * omega, length / steps);
      for (int i = 0; i < steps; ++i) {
        const double nu = m.m00 * u + m.m01 * v;
        const double nv = m.m10 * u + m.m11 * v;
        u = nu;
        v = nv;
        changed_on_last_step = previous != 0.0 && u != 0.0 && std::signbit(u) != std::signbit(previous);
        if (changed_on_last_step) ++changes;
        if (u != 0.0) previous = u;
      }
    }
    // A sign change on the final step is the zero at the wall itself.
    const int interior = changes - (changed_on_last_step ? 1 : 0);
    return {u, v, interior, changes + (u == 0.0 ? 1 : 0)};
  }

 private:
  std::vector<Segment> segments_;
  double half_box_ = 0.0;
};

// By Sturm oscillation the number of zeros of u(x; omega) in (-L/2, L/2]
// equals the number of eigenvalues below omega, which brackets each
// eigenvalue even when two of them nearly coincide.
std::vector<ShootingMode> shoot_spectrum(const Shooter& shooter, const BoxSpec& box, int k_max,
                                         int steps_per_half) {
  const double L = box.length;
  const double step = kPi / (4.0 * L);
  const double ceiling = 2.0 * kPi * (k_max + 8) / L;
  const auto zeros = [&](double w) { return shooter.shoot(w, steps_per_half).zeros; };
  const auto end_value = [&](double w) { return shooter.shoot(w, steps_per_half).end_value; };

  std::vector<ShootingMode> found;
  double lo = step / 2.0;
  if (zeros(lo) != 0) throw Error(ErrorKind::SpectrumGap, "eigenvalue below the scan start");
  for (int k = 1; k <= k_max; ++k) {
    double hi = lo + step;
    while (zeros(hi) < k) {
      lo = hi;
      hi += step;
      if (hi > ceiling) {
        throw Error(ErrorKind::SpectrumGap, "found only " + std::to_string(k - 1) + " of " +
                                                std::to_string(k_max) + " eigenvalues");
      }
    }
    // Narrow until exactly one eigenvalue lies in (lo, hi].
    while (zeros(hi) > k) {
      const double mid = 0.5 * (lo + hi);
      if (zeros(mid) >= k) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    const double root = solve_root(end_value, lo, hi, {1e-15, 1e-300, 400});
    const ShotResult shot = shooter.shoot(root, steps_per_half);
    if (shot.interior_nodes != k - 1) {
      throw Error(ErrorKind::SpectrumGap, "eigenvalue " + std::to_string(k) + " at omega = " +
                                              std::to_string(root) + " has " +
                                              std::to_string(shot.interior_nodes) + " nodes");
    }
    found.push_back({root, shot.end_slope > 0.0 ? Parity::Odd : Parity::Even, shot.interior_nodes});
    lo = hi;
  }
  return found;
}

}  // namespace

FiniteBoxRun FiniteBoxRun::make(const PotentialSpec& pot, const BoxSpec& box, int n_max,
                                NormCheck validation) {
  FiniteBoxRun run;
  run.pot_ = pot;
  run.box_ = box;
  run.n_max_ = n_max;
  run.modes_ = spectrum(pot, box, n_max);
  if (validation == NormCheck::Quadrature) {
    for (const ModeSolution& m : run.modes_) {
      const double worst = validate_mode(m, pot, box, NormCheck::Quadrature).max();
      if (!(worst < 1e-10)) {
        throw Error(ErrorKind::EigenvalueSolveFailure,
                    "mode (parity " + std::to_string(static_cast<int>(m.parity)) + ", index " +
                        std::to_string(m.index) + ") has residual " + std::to_string(worst));
      }
    }
  }
  run.free_modes_.reserve(run.modes_.size());
  for (const ModeSolution& m : run.modes_) run.free_modes_.push_back(free_mode(m.parity, m.index, box));
  return run;
}

const ModeSolution& FiniteBoxRun::mode(Parity parity, int n) const {
  if (n < 1 || n > n_max_) throw Error(ErrorKind::InvalidArgument, "mode index out of range");
  const std::size_t offset = parity == Parity::Odd ? 0 : static_cast<std::size_t>(n_max_);
  return modes_[offset + static_cast<std::size_t>(n - 1)];
}

int default_n_max(const PotentialSpec& pot, const BoxSpec& box, double cutoff_factor) {
  return static_cast<int>(std::ceil(cutoff_factor * box.length / pot.separation - 1e-9));
}

ModeSum finite_box_density(const FiniteBoxRun& run, double x) {
  const Region region = region_of(run, x);
  const BoxSpec& box = run.box();
  return averaged_mode_sum(run, [&](Parity parity, int n) {
    return mode_density(run.mode(parity, n), box, region) - mode_density(free_of(run, parity, n), box);
  });
}

ModeSum pointwise_box_density(const FiniteBoxRun& run, double x) {
  region_of(run, x);
  const BoxSpec& box = run.box();
  return averaged_mode_sum(run, [&](Parity parity, int n) {
    const ModeSolution& m = run.mode(parity, n);
    const ModeValue v = mode_eval(m, run.potential(), box, x);
    const double w = m.frequency;
    return 0.5 * (w * w * v.value * v.value + v.derivative * v.derivative) -
           mode_density(free_of(run, parity, n), box);
  });
}

double density_flatness_check(const FiniteBoxRun& run, const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  const Region region = region_of(run, xs.front());
  for (double x : xs) {
    if (region_of(run, x) != region) {
      throw Error(ErrorKind::InvalidArgument, "flatness points must share one region");
    }
  }
  const double reference = pointwise_box_density(run, xs.front()).value;
  double worst = 0.0;
  for (double x : xs) worst = std::max(worst, std::abs(pointwise_box_density(run, x).value - reference));
  return worst;
}

Extrapolation continuum_extrapolate(const PotentialSpec& pot, const std::vector<double>& lengths,
                                    double x, double cutoff_factor) {
  std::vector<double> sorted = lengths;
  std::sort(sorted.begin(), sorted.end());
  if (std::unique(sorted.begin(), sorted.end()) - sorted.begin() < 3) {
    throw Error(ErrorKind::InvalidArgument, "extrapolation needs at least three distinct box lengths");
  }

  Extrapolation out;
  for (double L : lengths) {
    const BoxSpec box = BoxSpec::make(L, pot);
    const FiniteBoxRun run = FiniteBoxRun::make(pot, box, default_n_max(pot, box, cutoff_factor));
    const ModeSum s = finite_box_density(run, x);
    out.lengths.push_back(L);
    out.values.push_back(s.value);
    out.tail_bounds.push_back(s.tail_bound);
  }

  const auto n = static_cast<double>(lengths.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const double inv = 1.0 / out.lengths[i];
    sx += inv;
    sy += out.values[i];
    sxx += inv * inv;
    sxy += inv * out.values[i];
  }
  const double det = n * sxx - sx * sx;
  out.slope = (n * sxy - sx * sy) / det;
  out.limit = (sy - out.slope * sx) / n;

  double squares = 0.0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const double r = out.values[i] - (out.limit + out.slope / out.lengths[i]);
    squares += r * r;
  }
  out.residual = std::sqrt(squares / n);

  const auto [lo, hi] = std::minmax_element(out.values.begin(), out.values.end());
  if (out.residual > 0.1 * (*hi - *lo)) {
    throw Error(ErrorKind::NonInverseLengthBehavior,
                "fit residual " + std::to_string(out.residual) + " exceeds 10% of the spread " +
                    std::to_string(*hi - *lo));
  }

  const bool same_sign = std::all_of(out.values.begin(), out.values.end(), [&](double v) {
    return v != 0.0 && std::signbit(v) == std::signbit(out.values.front());
  });
  if (same_sign) {
    double lx = 0.0, ly = 0.0, lxx = 0.0, lxy = 0.0;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
      const double u = std::log(out.lengths[i]);
      const double v = std::log(std::abs(out.values[i]));
      lx += u;
      ly += v;
      lxx += u * u;
      lxy += u * v;
    }
    out.exponent = (n * lxy - lx * ly) / (n * lxx - lx * lx);
    out.coefficient = std::copysign(std::exp((ly - out.exponent * lx) / n), out.values.front());
  } else {
    out.exponent = std::numeric_limits<double>::quiet_NaN();
    out.coefficient = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

JumpReport jump_consistency(const FiniteBoxRun& run) {
  const PotentialSpec& pot = run.potential();
  const BoxSpec& box = run.box();
  const double edge = -pot.separation / 2.0;
  JumpReport report;
  CompensatedSum total;
  CompensatedSum inner;
  CompensatedSum outer;
  for (int n = 1; n <= run.n_max(); ++n) {
    for (Parity parity : {Parity::Odd, Parity::Even}) {
      const ModeSolution& m = run.mode(parity, n);
      const ModeValue in = mode_eval(m, pot, box, edge, Side::Inner);
      const ModeValue out = mode_eval(m, pot, box, edge, Side::Outer);
      ModeJump j{parity, n, 0.0, 0.0};
      j.delta_t_direct = pot.strength / 2.0 * in.value * (out.derivative + in.derivative);
      j.delta_t_closed = m.frequency * m.norm_factor * m.norm_factor *
                         amplitude_sq_minus_one(parity, m.frequency, pot) / (2.0 * box.length);
      const double mismatch = std::abs(j.delta_t_direct - j.delta_t_closed);
      report.max_relative_mismatch =
          std::max(report.max_relative_mismatch,
                   j.delta_t_closed == 0.0 ? mismatch : mismatch / std::abs(j.delta_t_closed));
      total.add(j.delta_t_direct);
      const double free = mode_density(free_of(run, parity, n), box);
      inner.add(mode_density(m, box, Region::Inner) - free);
      outer.add(mode_density(m, box, Region::Outer) - free);
      report.per_mode.push_back(j);
    }
  }
  report.total_jump = total.value();
  report.region1_sum = inner.value();
  report.region2_sum = outer.value();
  report.density_difference = report.region1_sum - report.region2_sum;
  return report;
}

double integrated_box_energy(const FiniteBoxRun& run) {
  const double a = run.potential().separation;
  const double L = run.box().length;
  const double inner = finite_box_density(run, 0.0).value;
  const double outer = finite_box_density(run, (a / 2.0 + L / 2.0) / 2.0).value;
  return inner * a + outer * (L - a);
}

std::vector<ShootingMode> shooting_spectrum(const PotentialSpec& pot, const BoxSpec& box,
                                            double barrier_width, int k_max) {
  if (!(barrier_width > 0.0) || barrier_width > pot.separation / 100.0 * (1.0 + 1e-12)) {
    throw Error(ErrorKind::InvalidArgument, "barrier width must lie in (0, a/100]");
  }
  if (k_max < 1) throw Error(ErrorKind::InvalidArgument, "k_max must be >= 1");
  const Shooter shooter(pot, box, barrier_width);
  int steps = 1 << 10;
  std::vector<ShootingMode> coarse = shoot_spectrum(shooter, box, k_max, steps);
  while (steps < (1 << 20)) {
    steps *= 2;
    std::vector<ShootingMode> fine = shoot_spectrum(shooter, box, k_max, steps);
    double shift = 0.0;
    for (int k = 0; k < k_max; ++k) {
      const auto i = static_cast<std::size_t>(k);
      shift = std::max(shift, std::abs(fine[i].omega - coarse[i].omega) / fine[i].omega);
    }
    coarse = std::move(fine);
    if (shift < 1e-8) break;
  }
  return coarse;
}

std::vector<double> shooting_extrapolated(const PotentialSpec& pot, const BoxSpec& box,
                                          const std::vector<double>& widths, int k_max) {
  if (widths.size() != 3) throw Error(ErrorKind::InvalidArgument, "exactly three widths expected");
  std::vector<std::vector<ShootingMode>> runs;
  for (double w : widths) runs.push_back(shooting_spectrum(pot, box, w, k_max));
  std::vector<double> limit(static_cast<std::size_t>(k_max), 0.0);
  for (std::size_t i = 0; i < 3; ++i) {
    // Lagrange weight of node i evaluated at zero width.
    double weight = 1.0;
    for (std::size_t j = 0; j < 3; ++j) {
      if (j != i) weight *= widths[j] / (widths[j] - widths[i]);
    }
    for (std::size_t k = 0; k < limit.size(); ++k) limit[k] += weight * runs[i][k].omega;
  }
  return limit;
}

std::vector<double> lowest_frequencies(const PotentialSpec& pot, const BoxSpec& box, int k_max) {
  std::vector<double> all;
  for (const ModeSolution& m : spectrum(pot, box, k_max)) all.push_back(m.frequency);
  std::sort(all.begin(), all.end());
  all.resize(static_cast<std::size_t>(k_max));
  return all;
}

}  // namespace qineq
