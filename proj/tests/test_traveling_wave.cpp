#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "support.hpp"
#include "waves/dn_operator.hpp"
#include "waves/traveling_wave.hpp"

namespace waves {
namespace {

using namespace waves::testing;

const dn::MappedElliptic kElliptic{32};

// Shared fixture: φ = 0.5 cos x over b = 1 on a coarse grid.
class SlowWave : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    grid_ = new PeriodicGrid(1, 64);
    map_ = new tw::FixedPointMap(cosine(*grid_, 1, 0.5), dn::FluidConfig::finite(1.0), kElliptic);
  }
  static void TearDownTestSuite() {
    delete map_;
    delete grid_;
  }

  static tw::TravelingWaveProblem problem(double gamma) {
    return tw::TravelingWaveProblem::make(map_->phi(), gamma, map_->config());
  }

  static PeriodicGrid* grid_;
  static tw::FixedPointMap* map_;
};

PeriodicGrid* SlowWave::grid_ = nullptr;
tw::FixedPointMap* SlowWave::map_ = nullptr;

TEST(Problem, DefaultsAndValidation) {
  const PeriodicGrid g(1, 32);
  const auto prob = tw::TravelingWaveProblem::make(cosine(g, 1, 0.5), 0.05, dn::FluidConfig::finite(1.0));
  EXPECT_DOUBLE_EQ(tw::separation_mu(prob.phi, prob.cfg), 0.5);
  EXPECT_DOUBLE_EQ(prob.delta, 0.25);
  tw::validate(prob);

  const auto deep = tw::TravelingWaveProblem::make(cosine(g, 1, 0.5), 0.05, dn::FluidConfig::infinite());
  EXPECT_TRUE(std::isinf(tw::separation_mu(deep.phi, deep.cfg)));
  EXPECT_DOUBLE_EQ(deep.delta, 0.5);

  auto bad = prob;
  bad.phi = cosine(g, 1, 0.5) + SurfaceField::constant(g, 0.1);
  expect_error(ErrorCode::kInvalidArgument, [&] { tw::validate(bad); });
  bad = prob;
  bad.phi = cosine(g, 1, 1.5);
  expect_error(ErrorCode::kInvalidArgument, [&] { tw::validate(bad); });
  bad = prob;
  bad.delta = 0.5;
  expect_error(ErrorCode::kInvalidArgument, [&] { tw::validate(bad); });
  bad = prob;
  bad.tol = 0.0;
  expect_error(ErrorCode::kInvalidArgument, [&] { tw::validate(bad); });
}

TEST_F(SlowWave, MapVanishesAtOriginForZeroSpeed) {
  EXPECT_EQ((*map_)(SurfaceField(*grid_), 0.0).max_abs(), 0.0);
}

TEST_F(SlowWave, MapAtOriginInvertsTheForcing) {
  const double gamma = 0.05;
  const auto u = (*map_)(SurfaceField(*grid_), gamma);
  EXPECT_TRUE(u.mean_zero());
  // G[−φ]u = −γ∂₁φ, checked with a separately built, finer operator. The
  // budget covers the elliptic solves behind the frozen columns.
  const auto forcing = -gamma * spectral::derivative(map_->phi(), {1, 0});
  const auto back = dn::dn_apply(-map_->phi(), u, map_->config(), dn::MappedElliptic{48});
  EXPECT_LT(rel_hs(back, forcing, 2.0), 1e-8);
  // The un-frozen map agrees with the shared frozen one.
  EXPECT_LT(rel_hs(tw::apply_T(SurfaceField(*grid_), problem(gamma), kElliptic), u), 1e-8);
}

TEST_F(SlowWave, MapIsAffineInSpeed) {
  Rng rng(21);
  const auto zeta = spectral::project_mean_zero(scaled_random(*grid_, rng, 0.1));
  const double gamma = 0.07;
  const auto t0 = (*map_)(zeta, 0.0);
  const auto t1 = (*map_)(zeta, gamma);
  const auto t2 = (*map_)(zeta, 2 * gamma);
  EXPECT_LT(hs((t2 - t1) - (t1 - t0)), 1e-9 * hs(t1 - t0));
}

TEST_F(SlowWave, MapRejectsInadmissibleInput) {
  expect_error(ErrorCode::kBallExit, [&] { (*map_)(cosine(*grid_, 1, 0.6), 0.05); });
}

TEST(Residual, Anchors) {
  const PeriodicGrid g(1, 64);
  const auto phi = cosine(g, 1, 0.5);
  const auto cfg = dn::FluidConfig::finite(1.0);
  EXPECT_LT(tw::residual(-phi, 0.0, phi, cfg, kElliptic), 1e-13);
  // G[−φ](0) = 0 leaves only the transport term.
  const auto dphi = SurfaceField::sample(g, [](double x, double) { return -0.5 * std::sin(x); });
  for (double gamma : {0.05, -0.3}) {
    const double expected = std::abs(gamma) * oracle::hs_norm(dphi, 2.0);
    EXPECT_NEAR(tw::residual(-phi, gamma, phi, cfg, kElliptic), expected, 1e-12 * expected) << gamma;
  }
}

TEST_F(SlowWave, ZeroSpeedIsTheTrivialWave) {
  const auto sol = tw::solve_traveling_wave(*map_, problem(0.0));
  EXPECT_EQ(sol.iterations(), 1);
  EXPECT_LT(oracle::max_abs_diff(sol.eta, -map_->phi()), 1e-15);
  EXPECT_LE(sol.residual_norm, 1e-12);
}

TEST_F(SlowWave, SlowSpeedConverges) {
  auto prob = problem(0.05);
  const auto sol = tw::solve_traveling_wave(*map_, prob);
  EXPECT_LE(sol.residual_norm, prob.tol);
  EXPECT_GT(sol.contraction_factor, 0.0);
  EXPECT_LT(sol.contraction_factor, 0.5);
  EXPECT_TRUE(sol.eta.mean_zero());
  EXPECT_LE(sol.iter_trace.back(), prob.tol);
  EXPECT_GT(sol.zeta_w1_inf, 0.0);
  // The independent residual is recomputed here with a finer vertical grid.
  EXPECT_LT(tw::residual(sol.eta, 0.05, map_->phi(), map_->config(), dn::MappedElliptic{48}), 10 * prob.tol);

  // Fixed-point consistency.
  const auto zeta = sol.eta + map_->phi();
  EXPECT_LE(hs((*map_)(zeta, 0.05) - zeta), 2 * prob.tol);

  // Uniqueness in the ball: a random start inside the ball lands on the same wave.
  Rng rng(5);
  const auto start = spectral::project_mean_zero(scaled_random(*grid_, rng, 0.5 * prob.delta));
  const auto other = tw::solve_traveling_wave(*map_, prob, &start);
  EXPECT_LE(hs(other.eta - sol.eta), 10 * prob.tol);
}

TEST_F(SlowWave, ContractionFactorGrowsWithSpeed) {
  double previous = 0.0;
  for (double gamma : {0.02, 0.05, 0.1, 0.2}) {
    const auto sol = tw::solve_traveling_wave(*map_, problem(gamma));
    EXPECT_GE(sol.contraction_factor, previous) << gamma;
    previous = sol.contraction_factor;
  }
}

TEST_F(SlowWave, LargeSpeedDoesNotContract) {
  expect_error(ErrorCode::kNoContraction, [&] { tw::solve_traveling_wave(*map_, problem(5.0)); });
}

TEST_F(SlowWave, InadmissibleStartExitsTheBall) {
  const auto start = cosine(*grid_, 2, 0.55);
  expect_error(ErrorCode::kBallExit, [&] { tw::solve_traveling_wave(*map_, problem(0.05), &start); });
}

TEST(Continuation, SinglePointIsTrivial) {
  const PeriodicGrid g(1, 32);
  const auto phi = cosine(g, 1, 0.5);
  const auto res = tw::continuation_in_gamma(phi, dn::FluidConfig::finite(1.0), {0.0}, 0.0, 1e-10, kElliptic);
  ASSERT_EQ(res.entries.size(), 1u);
  ASSERT_TRUE(res.entries[0].solution.has_value());
  EXPECT_LT(oracle::max_abs_diff(res.entries[0].solution->eta, -phi), 1e-15);
  EXPECT_TRUE(res.quotients.empty());
  EXPECT_EQ(res.lipschitz_estimate, 0.0);
  expect_error(ErrorCode::kInvalidArgument, [&] {
    tw::continuation_in_gamma(phi, dn::FluidConfig::finite(1.0), {0.0, 0.02, 0.01}, 0.0, 1e-10, kElliptic);
  });
}

TEST(Continuation, QuotientsAreRegularAndPathIndependent) {
  const PeriodicGrid g(1, 64);
  const auto phi = cosine(g, 1, 0.5);
  const auto cfg = dn::FluidConfig::finite(1.0);
  const std::vector<double> up{0.0, 0.01, 0.02, 0.03, 0.04, 0.05};
  const double tol = 1e-10;
  const auto fwd = tw::continuation_in_gamma(phi, cfg, up, 0.0, tol, kElliptic);
  ASSERT_EQ(fwd.quotients.size(), up.size() - 1);
  const auto [lo, hi] = std::minmax_element(fwd.quotients.begin(), fwd.quotients.end());
  EXPECT_LT(*hi / *lo, 1.3);
  EXPECT_DOUBLE_EQ(fwd.lipschitz_estimate, *hi);

  const std::vector<double> down(up.rbegin(), up.rend());
  const auto bwd = tw::continuation_in_gamma(phi, cfg, down, 0.0, tol, kElliptic);
  for (std::size_t i = 0; i < up.size(); ++i) {
    const auto& a = fwd.entries[i];
    const auto& b = bwd.entries[up.size() - 1 - i];
    ASSERT_TRUE(a.solution && b.solution) << up[i];
    EXPECT_DOUBLE_EQ(a.gamma, b.gamma);
    EXPECT_LE(hs(a.solution->eta - b.solution->eta), 10 * tol) << up[i];
  }
}

TEST(Continuation, FailuresAreRecordedPerEntry) {
  const PeriodicGrid g(1, 32);
  const auto phi = cosine(g, 1, 0.5);
  const auto res = tw::continuation_in_gamma(phi, dn::FluidConfig::finite(1.0), {0.0, 0.02, 5.0}, 0.0, 1e-10,
                                             kElliptic);
  ASSERT_EQ(res.entries.size(), 3u);
  EXPECT_TRUE(res.entries[1].solution.has_value());
  EXPECT_FALSE(res.entries[2].solution.has_value());
  ASSERT_TRUE(res.entries[2].error.has_value());
  EXPECT_EQ(*res.entries[2].error, ErrorCode::kNoContraction);
  EXPECT_EQ(res.quotients.size(), 1u);
}

TEST(Residual, BackendsAgreeOnSmallWaves) {
  const PeriodicGrid g(1, 64);
  const auto phi = cosine(g, 1, 0.05);
  const auto cfg = dn::FluidConfig::finite(1.0);
  const auto sol = tw::solve_traveling_wave(tw::TravelingWaveProblem::make(phi, 0.05, cfg), kElliptic);
  Rng rng(8);
  const auto off = sol.eta + spectral::project_mean_zero(scaled_random(g, rng, 1e-3));
  for (const auto& eta : {sol.eta, off}) {
    const double cs = tw::residual(eta, 0.05, phi, cfg, dn::CraigSulem{4});
    const double me = tw::residual(eta, 0.05, phi, cfg, kElliptic);
    EXPECT_NEAR(cs, me, 1e-6);
  }
}

TEST(InfiniteDepth, SlowWaveConverges) {
  const PeriodicGrid g(1, 32);
  const auto prob = tw::TravelingWaveProblem::make(cosine(g, 1, 0.5), 0.05, dn::FluidConfig::infinite());
  const auto sol = tw::solve_traveling_wave(prob, kElliptic);
  EXPECT_LE(sol.residual_norm, prob.tol);
  EXPECT_LT(sol.contraction_factor, 0.5);
}

TEST(ContractionFit, RecoversGeometricRatio) {
  std::vector<double> trace;
  for (int i = 0; i < 12; ++i) trace.push_back(0.8 * std::pow(0.3, i));
  EXPECT_NEAR(tw::fit_contraction_factor(trace, 0.0), 0.3, 1e-12);
  // Entries at the floor are ignored.
  trace.push_back(1e-20);
  trace.push_back(1e-20);
  EXPECT_NEAR(tw::fit_contraction_factor(trace, 1e-15), 0.3, 1e-12);
  EXPECT_EQ(tw::fit_contraction_factor({1e-3}, 0.0), 0.0);
}

}  // namespace
}  // namespace waves
