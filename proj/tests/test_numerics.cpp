#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "qineq/errors.hpp"
#include "qineq/numerics.hpp"

namespace qineq {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Integrate, ZeroIntegrandIsExactlyZero) {
  const auto r = integrate([](double) { return 0.0; }, Interval{0.0, 1.0});
  EXPECT_EQ(r.value, 0.0);
}

TEST(Integrate, ExponentialOnHalfLine) {
  const Tolerances tol{1e-12, 1e-15, 200};
  const auto r = integrate([](double x) { return std::exp(-2.0 * x); }, HalfLine{0.0, 0.5}, tol);
  EXPECT_NEAR(r.value, 0.5, 1e-12 * 0.5);
}

TEST(Integrate, GeometricSeriesIntegral) {
  const Tolerances tol{1e-12, 1e-15, 200};
  const auto f = [](double y) { return y == 0.0 ? 1.0 : y * std::exp(-y) / std::sinh(y); };
  const auto r = integrate(f, HalfLine{0.0, 1.0}, tol);
  EXPECT_NEAR(r.value, kPi * kPi / 12.0, 1e-11);
}

TEST(Integrate, AlgebraicTailMap) {
  const Tolerances tol{1e-12, 1e-15, 200};
  const auto r =
      integrate([](double x) { return 1.0 / (1.0 + x * x); }, HalfLine{0.0, 1.0, TailMap::Algebraic}, tol);
  EXPECT_NEAR(r.value, kPi / 2.0, 1e-12);
}

TEST(Integrate, BitIdenticalOnRepeat) {
  const auto f = [](double x) { return std::sin(7.0 * x) * std::exp(-x); };
  const auto a = integrate(f, Interval{0.0, 10.0});
  const auto b = integrate(f, Interval{0.0, 10.0});
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.error_estimate, b.error_estimate);
}

TEST(Integrate, BudgetExhaustionReportsPartialValue) {
  const auto f = [](double x) { return std::sin(1.0 / (x + 1e-9)); };
  try {
    integrate(f, Interval{0.0, 1.0}, {1e-14, 1e-16, 5});
    FAIL() << "expected QuadratureFailure";
  } catch (const QuadratureFailure& e) {
    EXPECT_EQ(e.kind(), ErrorKind::QuadratureFailure);
    EXPECT_TRUE(std::isfinite(e.partial_value()));
    EXPECT_GT(e.error_estimate(), 0.0);
  }
}

TEST(Integrate, NonFiniteIntegrandIsReported) {
  EXPECT_THROW(integrate([](double x) { return 1.0 / (x - 0.5) / 0.0; }, Interval{0.0, 1.0}),
               IntegrandSingularity);
}

TEST(Integrate, PanelsRespectKinks) {
  const std::vector<double> edges = {-1.0, 0.0, 1.0};
  const auto r = integrate_panels([](double x) { return std::abs(x); }, edges);
  EXPECT_NEAR(r.value, 1.0, 1e-14);
}

TEST(Tolerances, ValidateRejectsNonPositive) {
  EXPECT_THROW((Tolerances{0.0, 1e-12, 10}.validate()), Error);
  EXPECT_THROW((Tolerances{1e-10, -1.0, 10}.validate()), Error);
  EXPECT_THROW((Tolerances{1e-10, 1e-12, 0}.validate()), Error);
  EXPECT_NO_THROW(Tolerances{}.validate());
}

TEST(AverageOscillatory, ZeroMeanOscillation) {
  const auto r = average_oscillatory([](double x) { return std::sin(2.0 * x); }, 0.0, kPi, 8);
  EXPECT_NEAR(r.value, 0.0, 1e-12);
}

TEST(AverageOscillatory, DecayingPartDominates) {
  const auto r =
      average_oscillatory([](double x) { return std::exp(-x) + std::sin(2.0 * x); }, 0.0, kPi, 16);
  EXPECT_NEAR(r.value, 1.0, 1e-3);
}

TEST(AverageOscillatory, TooFewCycles) {
  EXPECT_THROW(average_oscillatory([](double) { return 0.0; }, 0.0, 1.0, 3), Error);
}

TEST(SolveRoot, LinearRoot) {
  EXPECT_NEAR(solve_root([](double x) { return x - 1.0; }, 0.0, 2.0), 1.0, 1e-12);
}

TEST(SolveRoot, CosineRoot) {
  EXPECT_NEAR(solve_root([](double x) { return std::cos(x); }, 1.0, 2.0, {1e-14, 1e-15, 200}), kPi / 2.0,
              1e-13);
}

TEST(SolveRoot, SameSignBracketIsRejected) {
  try {
    solve_root([](double x) { return x * x + 1.0; }, -1.0, 1.0);
    FAIL() << "expected InvalidBracket";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidBracket);
  }
}

TEST(SolveRoot, ExactZeroAtEndpoint) {
  EXPECT_EQ(solve_root([](double x) { return x; }, 0.0, 1.0), 0.0);
}

TEST(CompensatedSum, RecoversCancelledBits) {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 10; ++i) s.add(1e-16);
  s.add(-1.0);
  EXPECT_NEAR(s.value(), 1e-15, 1e-30);
}

}  // namespace
}  // namespace qineq
