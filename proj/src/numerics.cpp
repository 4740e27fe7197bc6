#include "qineq/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "qineq/errors.hpp"

namespace qineq {

void Tolerances::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "tolerances must be strictly positive");
  }
  if (max_iter < 1) {
    throw Error(ErrorKind::InvalidArgument, "max_iter must be at least 1");
  }
}

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

namespace {

// 15-point Kronrod abscissae and weights with the embedded 7-point Gauss rule.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
};

class Evaluator {
 public:
  explicit Evaluator(const RealFunction& f) : f_(f) {}

  double operator()(double x) {
    ++count_;
    const double y = f_(x);
    if (!std::isfinite(y)) throw IntegrandSingularity(x);
    return y;
  }

  std::size_t count() const { return count_; }

 private:
  const RealFunction& f_;
  std::size_t count_ = 0;
};

Panel gauss_kronrod(Evaluator& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  double abs_sum = std::abs(kronrod);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    const double pair = f1[j] + f2[j];
    kronrod += kKronrodWeights[j] * pair;
    abs_sum += kKronrodWeights[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    asc += kKronrodWeights[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  const double scale = std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  asc *= scale;
  abs_sum *= scale;
  if (asc != 0.0 && err != 0.0) {
    err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  }
  if (abs_sum > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * abs_sum, err);
  }
  return {lo, hi, kronrod * half, err};
}

struct LargerError {
  bool operator()(const Panel& a, const Panel& b) const {
    if (a.error != b.error) return a.error < b.error;
    return a.lo > b.lo;
  }
};

QuadratureResult adaptive(Evaluator& f, std::span<const double> edges, const Tolerances& tol) {
  tol.validate();
  std::priority_queue<Panel, std::vector<Panel>, LargerError> queue;
  std::vector<Panel> settled;
  double total = 0.0;
  double total_error = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (edges[i] == edges[i + 1]) continue;
    Panel p = gauss_kronrod(f, edges[i], edges[i + 1]);
    total += p.value;
    total_error += p.error;
    queue.push(p);
  }

  auto tolerance = [&] { return std::max(tol.abs_tol, tol.rel_tol * std::abs(total)); };

  int splits = 0;
  while (!queue.empty() && total_error > tolerance()) {
    Panel worst = queue.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const bool splittable = mid > std::min(worst.lo, worst.hi) &&
                            mid < std::max(worst.lo, worst.hi) &&
                            std::abs(worst.hi - worst.lo) > 100.0 * kEps * std::abs(mid);
    if (!splittable) {
      // Resolution limit reached on this panel: accept it as is.
      queue.pop();
      settled.push_back(worst);
      continue;
    }
    if (splits == tol.max_iter) {
      throw QuadratureFailure(total, total_error);
    }
    queue.pop();
    const Panel left = gauss_kronrod(f, worst.lo, mid);
    const Panel right = gauss_kronrod(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++splits;
  }

  while (!queue.empty()) {
    settled.push_back(queue.top());
    queue.pop();
  }
  std::sort(settled.begin(), settled.end(),
            [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
  CompensatedSum value;
  CompensatedSum error;
  for (const Panel& p : settled) {
    value.add(p.value);
    error.add(p.error);
  }
  return {value.value(), std::abs(error.value()), f.count()};
}

}  // namespace

QuadratureResult integrate_panels(const RealFunction& f, std::span<const double> edges,
                                  const Tolerances& tol) {
  if (edges.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "integrate_panels needs at least two edges");
  }
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i] <= edges[i + 1]) || !std::isfinite(edges[i + 1])) {
      throw Error(ErrorKind::InvalidArgument, "panel edges must be finite and non-decreasing");
    }
  }
  Evaluator eval(f);
  QuadratureResult r = adaptive(eval, edges, tol);
  if (r.evaluations == 0) r.evaluations = 1;
  return r;
}

QuadratureResult integrate(const RealFunction& f, const Domain& domain, const Tolerances& tol) {
  if (const auto* iv = std::get_if<Interval>(&domain)) {
    if (!std::isfinite(iv->lo) || !std::isfinite(iv->hi)) {
      throw Error(ErrorKind::InvalidArgument, "finite interval expected; use HalfLine");
    }
    if (iv->lo == iv->hi) {
      return {0.0, 0.0, 1};
    }
    const double sign = iv->lo < iv->hi ? 1.0 : -1.0;
    const std::array<double, 2> edges = {std::min(iv->lo, iv->hi), std::max(iv->lo, iv->hi)};
    QuadratureResult r = integrate_panels(f, edges, tol);
    r.value *= sign;
    return r;
  }

  const auto& half_line = std::get<HalfLine>(domain);
  if (!(half_line.scale > 0.0) || !std::isfinite(half_line.start)) {
    throw Error(ErrorKind::InvalidArgument, "half-line needs a finite start and positive scale");
  }
  const double start = half_line.start;
  const double scale = half_line.scale;
  RealFunction mapped;
  if (half_line.map == TailMap::Logarithmic) {
    mapped = [&f, start, scale](double t) {
      const double rest = 1.0 - t;
      const double x = start - scale * std::log(rest);
      const double fx = f(x);
      return fx == 0.0 ? 0.0 : fx * scale / rest;
    };
  } else {
    mapped = [&f, start, scale](double t) {
      const double rest = 1.0 - t;
      const double x = start + scale * t / rest;
      const double fx = f(x);
      return fx == 0.0 ? 0.0 : fx * scale / (rest * rest);
    };
  }
  const std::array<double, 3> edges = {0.0, 0.5, 1.0};
  try {
    return integrate_panels(mapped, edges, tol);
  } catch (const IntegrandSingularity& e) {
    const double t = e.location();
    const double x = half_line.map == TailMap::Logarithmic ? start - scale * std::log(1.0 - t)
                                                           : start + scale * t / (1.0 - t);
    throw IntegrandSingularity(x);
  }
}

QuadratureResult average_oscillatory(const RealFunction& f, double start, double period,
                                     int cycles, const Tolerances& tol, int panels_per_period) {
  if (cycles < 4) {
    throw Error(ErrorKind::InsufficientAveragingWindow, "at least 4 cycles are required");
  }
  if (!(period > 0.0) || !std::isfinite(start)) {
    throw Error(ErrorKind::InvalidArgument, "period must be positive and start finite");
  }
  panels_per_period = std::max(1, panels_per_period);

  std::vector<double> edges(static_cast<std::size_t>(panels_per_period) + 1);
  CompensatedSum cumulative;
  double quadrature_error = 0.0;
  std::size_t evaluations = 0;
  std::vector<double> kept;
  kept.reserve(static_cast<std::size_t>(cycles - cycles / 2));
  for (int k = 0; k < cycles; ++k) {
    const double lo = start + k * period;
    for (int i = 0; i <= panels_per_period; ++i) {
      edges[static_cast<std::size_t>(i)] = lo + period * i / panels_per_period;
    }
    const QuadratureResult piece = integrate_panels(f, edges, tol);
    cumulative.add(piece.value);
    quadrature_error += piece.error_estimate;
    evaluations += piece.evaluations;
    if (k + 1 > cycles / 2) kept.push_back(cumulative.value());
  }

  CompensatedSum mean;
  for (double v : kept) mean.add(v);
  const auto [lo_it, hi_it] = std::minmax_element(kept.begin(), kept.end());
  return {mean.value() / static_cast<double>(kept.size()), (*hi_it - *lo_it) + quadrature_error,
          evaluations};
}

double solve_root(const RealFunction& f, double lo, double hi, const Tolerances& tol) {
  tol.validate();
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorKind::InvalidBracket, "bracket endpoints must be finite");
  }
  if (lo > hi) std::swap(lo, hi);
  double f_lo = f(lo);
  double f_hi = f(hi);
  if (!std::isfinite(f_lo) || !std::isfinite(f_hi)) {
    throw Error(ErrorKind::InvalidBracket, "function is not finite at the bracket endpoints");
  }
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (std::signbit(f_lo) == std::signbit(f_hi)) {
    throw Error(ErrorKind::InvalidBracket, "f(lo) and f(hi) have the same sign");
  }

  // Illinois variant of regula falsi, with a bisection step whenever the
  // bracket failed to shrink by half over the previous step.
  int stale_side = 0;
  double previous_width = hi - lo;
  const int budget = std::max(tol.max_iter, 400);
  for (int iter = 0; iter < budget; ++iter) {
    const double width = hi - lo;
    const double mid = 0.5 * (lo + hi);
    if (width <= std::max(tol.abs_tol, tol.rel_tol * std::abs(mid)) || mid <= lo || mid >= hi) {
      return mid;
    }
    double x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    if (!(x > lo && x < hi) || width > 0.5 * previous_width) {
      x = mid;
    }
    previous_width = width;
    const double fx = f(x);
    if (!std::isfinite(fx)) {
      throw Error(ErrorKind::InvalidBracket, "function is not finite inside the bracket");
    }
    if (fx == 0.0) return x;
    if (std::signbit(fx) == std::signbit(f_lo)) {
      lo = x;
      f_lo = fx;
      if (stale_side == -1) f_hi *= 0.5;
      stale_side = -1;
    } else {
      hi = x;
      f_hi = fx;
      if (stale_side == 1) f_lo *= 0.5;
      stale_side = 1;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace qineq
