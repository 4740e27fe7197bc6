#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "qineq/energy.hpp"
#include "qineq/errors.hpp"
#include "qineq/oracle.hpp"

namespace qineq {
namespace {

constexpr double kPi = std::numbers::pi;

PotentialSpec coupling(double c, double a = 1.0) { return PotentialSpec::from_coupling(c, a); }

FiniteBoxRun unit_run(double c, double L, int n_max) {
  const auto pot = coupling(c);
  return FiniteBoxRun::make(pot, BoxSpec::make(L, pot), n_max);
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvariantViolation;
}

TEST(FiniteBoxRun, ModeLookup) {
  const auto run = unit_run(1.0, 50.0, 12);
  EXPECT_EQ(run.modes().size(), 24u);
  EXPECT_EQ(run.mode(Parity::Even, 3).parity, Parity::Even);
  EXPECT_EQ(run.mode(Parity::Even, 3).index, 3);
  EXPECT_EQ(run.mode(Parity::Odd, 12).index, 12);
}

TEST(FiniteBoxRun, DefaultModeCount) {
  const auto pot = coupling(1.0, 2.0);
  EXPECT_EQ(default_n_max(pot, BoxSpec::make(100.0, pot)), 2000);
}

TEST(FiniteBoxDensity, FreeFieldCancelsExactly) {
  const auto run = unit_run(0.0, 50.0, 400);
  for (double x : {0.0, 0.3, 0.9, -12.0, 24.9}) {
    EXPECT_EQ(finite_box_density(run, x).value, 0.0);
  }
}

TEST(FiniteBoxDensity, RejectsBarrierAndOutside) {
  const auto run = unit_run(1.0, 50.0, 20);
  EXPECT_EQ(kind_of([&] { finite_box_density(run, 0.5); }), ErrorKind::SingularPoint);
  EXPECT_EQ(kind_of([&] { finite_box_density(run, -0.5 + 1e-12); }), ErrorKind::SingularPoint);
  EXPECT_EQ(kind_of([&] { finite_box_density(run, 26.0); }), ErrorKind::OutsideBox);
}

// At L = 100 a the box still carries the uniform beta/L offset (about 8% of
// the inner value); once that is removed the sum sits on the continuum.
TEST(FiniteBoxDensity, LargeCutoffApproachesContinuum) {
  const auto run = unit_run(1.0, 100.0, 5000);
  const double continuum = eta_components(coupling(1.0)).sum();
  const double offset = beta_coefficient(coupling(1.0)) / 100.0;
  EXPECT_NEAR(finite_box_density(run, 0.0).value - offset, continuum, 0.02 * std::abs(continuum));
}

TEST(FiniteBoxDensity, OuterValueScalesInversely) {
  std::vector<double> scaled;
  for (double L : {50.0, 100.0, 200.0}) {
    const auto pot = coupling(1.0);
    const auto box = BoxSpec::make(L, pot);
    const auto run = FiniteBoxRun::make(pot, box, default_n_max(pot, box));
    scaled.push_back(finite_box_density(run, 1.0).value * L);
  }
  const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
  EXPECT_GT(*lo, 0.0);
  EXPECT_LT((*hi - *lo) / *hi, 0.15);
}

TEST(FiniteBoxDensity, PointwiseMatchesClosedForm) {
  const auto run = unit_run(2.0, 40.0, 300);
  for (double x : {0.0, 0.2, 3.0, -17.0}) {
    EXPECT_NEAR(pointwise_box_density(run, x).value, finite_box_density(run, x).value, 1e-12);
  }
}

TEST(Flatness, InnerRegion) {
  const auto run = unit_run(1.0, 100.0, 4000);
  const double eta = std::abs(eta_components(coupling(1.0)).sum());
  EXPECT_LT(density_flatness_check(run, {0.0, 0.25, -0.25, 0.4, -0.4}), 1e-8 * eta);
}

TEST(Flatness, OuterRegion) {
  const auto run = unit_run(1.0, 100.0, 4000);
  const double eta = std::abs(eta_components(coupling(1.0)).sum());
  EXPECT_LT(density_flatness_check(run, {0.75, 2.0, -9.0, 30.0, -49.0}), 1e-8 * eta);
}

TEST(Flatness, FreeFieldIsZero) {
  const auto run = unit_run(0.0, 20.0, 200);
  // Roundoff of omega^2 (sin^2 + cos^2) only.
  EXPECT_LT(density_flatness_check(run, {0.0, 0.1, -0.3}), 1e-14);
  EXPECT_EQ(finite_box_density(run, 0.1).value, 0.0);
}

TEST(Flatness, MixedRegionsRejected) {
  const auto run = unit_run(1.0, 20.0, 10);
  EXPECT_EQ(kind_of([&] { density_flatness_check(run, {0.0, 2.0}); }), ErrorKind::InvalidArgument);
}

TEST(ContinuumExtrapolate, InnerLimit) {
  const auto e = continuum_extrapolate(coupling(1.0), {50.0, 100.0, 200.0}, 0.0);
  const double continuum = eta_components(coupling(1.0)).sum();
  EXPECT_NEAR(e.limit, continuum, 0.01 * std::abs(continuum));
  EXPECT_EQ(e.lengths.size(), 3u);
}

TEST(ContinuumExtrapolate, OuterDecay) {
  const auto pot = coupling(1.0);
  const auto e = continuum_extrapolate(pot, {50.0, 100.0, 200.0}, 0.75);
  const double continuum = eta_components(pot).sum();
  const double beta = beta_coefficient(pot);
  EXPECT_LT(std::abs(e.limit), 0.01 * std::abs(continuum));
  EXPECT_NEAR(e.slope, beta, 0.1 * beta);
  EXPECT_NEAR(e.exponent, -1.0, 0.1);
  EXPECT_NEAR(e.coefficient, beta, 0.1 * beta);
}

TEST(ContinuumExtrapolate, FreeFieldIsZero) {
  const auto e = continuum_extrapolate(coupling(0.0), {20.0, 40.0, 80.0}, 0.75);
  EXPECT_NEAR(e.limit, 0.0, 1e-12);
  EXPECT_NEAR(e.slope, 0.0, 1e-12);
}

TEST(ContinuumExtrapolate, NeedsThreeLengths) {
  EXPECT_EQ(kind_of([] { continuum_extrapolate(coupling(1.0), {50.0, 100.0, 100.0}, 0.0); }),
            ErrorKind::InvalidArgument);
}

TEST(JumpConsistency, FreeFieldHasNoJumps) {
  const auto report = jump_consistency(unit_run(0.0, 50.0, 30));
  for (const auto& j : report.per_mode) {
    EXPECT_EQ(j.delta_t_direct, 0.0);
    EXPECT_EQ(j.delta_t_closed, 0.0);
  }
  EXPECT_EQ(report.total_jump, 0.0);
}

TEST(JumpConsistency, RoutesAgreePerMode) {
  const auto report = jump_consistency(unit_run(1.0, 100.0, 50));
  ASSERT_EQ(report.per_mode.size(), 100u);
  for (const auto& j : report.per_mode) {
    EXPECT_NEAR(j.delta_t_direct, j.delta_t_closed, 1e-12 * std::abs(j.delta_t_closed));
  }
  EXPECT_LE(report.max_relative_mismatch, 1e-12);
}

TEST(JumpConsistency, TotalMatchesDensityDifference) {
  for (int n_max : {7, 50, 333}) {
    const auto report = jump_consistency(unit_run(1.0, 100.0, n_max));
    EXPECT_NEAR(report.total_jump, report.density_difference, 1e-13) << "n_max " << n_max;
  }
}

TEST(IntegratedEnergy, NonNegative) {
  for (double c : {0.5, 1.0, 5.0}) {
    const auto pot = coupling(c);
    const auto box = BoxSpec::make(100.0, pot);
    EXPECT_GE(integrated_box_energy(FiniteBoxRun::make(pot, box, default_n_max(pot, box))), 0.0);
  }
}

TEST(Shooting, FreeSpectrum) {
  const auto pot = coupling(0.0);
  const auto box = BoxSpec::make(20.0, pot);
  const auto modes = shooting_spectrum(pot, box, 0.01, 8);
  for (int k = 0; k < 8; ++k) {
    const double exact = kPi * (k + 1) / box.length;
    EXPECT_NEAR(modes[static_cast<std::size_t>(k)].omega, exact, 1e-6 * exact);
  }
}

TEST(Shooting, ParityAlternatesAndNodesCount) {
  const auto pot = coupling(1.0);
  const auto modes = shooting_spectrum(pot, BoxSpec::make(20.0, pot), 0.005, 10);
  for (std::size_t k = 0; k < modes.size(); ++k) {
    EXPECT_EQ(modes[k].parity, k % 2 == 0 ? Parity::Even : Parity::Odd);
    EXPECT_EQ(modes[k].nodes, static_cast<int>(k));
  }
}

TEST(Shooting, ConvergesLinearlyInWidth) {
  const auto pot = coupling(1.0);
  const auto box = BoxSpec::make(20.0, pot);
  const auto exact = lowest_frequencies(pot, box, 10);
  const auto coarse = shooting_spectrum(pot, box, 0.01, 10);
  const auto fine = shooting_spectrum(pot, box, 0.005, 10);
  for (std::size_t k = 0; k < exact.size(); ++k) {
    const double e1 = coarse[k].omega - exact[k];
    const double e2 = fine[k].omega - exact[k];
    EXPECT_NEAR(e1 / e2, 2.0, 0.1) << "mode " << k;
  }
}

TEST(Shooting, ExtrapolatedMatchesSpectrum) {
  const auto pot = coupling(1.0);
  const auto box = BoxSpec::make(20.0, pot);
  const auto exact = lowest_frequencies(pot, box, 10);
  const auto shot = shooting_extrapolated(pot, box, {1.0 / 200.0, 1.0 / 400.0, 1.0 / 800.0}, 10);
  for (std::size_t k = 0; k < exact.size(); ++k) {
    EXPECT_NEAR(shot[k], exact[k], 1e-6 * exact[k]);
  }
}

TEST(Shooting, WidthMustBeNarrow) {
  const auto pot = coupling(1.0);
  EXPECT_EQ(kind_of([&] { shooting_spectrum(pot, BoxSpec::make(20.0, pot), 0.05, 3); }),
            ErrorKind::InvalidArgument);
}

}  // namespace
}  // namespace qineq
