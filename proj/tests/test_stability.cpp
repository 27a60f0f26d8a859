#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "support.hpp"
#include "waves/dn_diagnostics.hpp"
#include "waves/stability.hpp"

namespace waves {
namespace {

using namespace waves::testing;

const dn::MappedElliptic kElliptic{24};

evo::SchemeConfig imex2(double dt) {
  evo::SchemeConfig c;
  c.dt = dt;
  return c;
}

tw::TravelingWaveSolution solve(const SurfaceField& phi, double gamma, const dn::FluidConfig& cfg) {
  return tw::solve_traveling_wave(tw::TravelingWaveProblem::make(phi, gamma, cfg), kElliptic);
}

lab::PerturbationSpec modes(std::vector<int> ks, double amplitude, double phase_shift = 0.0) {
  lab::PerturbationSpec p;
  for (int k : ks) {
    lab::ModeAmplitude m;
    m.k1 = k;
    m.weight = 1.0 / k;
    m.phase = -k * phase_shift;
    p.modes.push_back(m);
  }
  p.amplitude = amplitude;
  return p;
}

TEST(FitDecay, RecoversExponentials) {
  std::vector<double> t, decaying, growing;
  for (int i = 0; i <= 50; ++i) {
    t.push_back(0.1 * i);
    decaying.push_back(2e-3 * std::exp(-0.7 * t.back()));
    growing.push_back(1e-3 * std::exp(0.2 * t.back()));
  }
  const auto rep = lab::fit_decay(t, decaying, {});
  EXPECT_EQ(rep.verdict, lab::Verdict::kDecayed);
  EXPECT_NEAR(rep.rate, 0.7, 1e-12);
  EXPECT_NEAR(rep.r2, 1.0, 1e-12);
  EXPECT_NEAR(rep.prefactor, 1.0, 1e-12);
  EXPECT_NEAR(rep.fit_start, 0.5, 1e-12);
  EXPECT_EQ(rep.fit_samples, 46);
  EXPECT_EQ(lab::fit_decay(t, growing, {}).verdict, lab::Verdict::kNotDecayed);

  // Samples near the round-off floor leave too few points.
  lab::FitWindow window;
  window.floor = 2e-5;
  EXPECT_EQ(lab::fit_decay(t, decaying, window).verdict, lab::Verdict::kInconclusive);
  expect_error(ErrorCode::kInvalidArgument, [] { lab::fit_decay({0.0, 0.0}, {1.0, 1.0}, {}); });
  EXPECT_STREQ(lab::to_string(lab::Verdict::kNotDecayed), "NotDecayed");
}

TEST(FitDecay, NoisyDataFailsTheQualityGate) {
  std::vector<double> t, norms;
  for (int i = 0; i <= 50; ++i) {
    t.push_back(0.1 * i);
    norms.push_back(std::exp(-0.05 * t.back()) * (i % 2 == 0 ? 1.5 : 0.7));
  }
  const auto rep = lab::fit_decay(t, norms, {});
  EXPECT_LT(rep.r2, 0.99);
  EXPECT_EQ(rep.verdict, lab::Verdict::kNotDecayed);
}

TEST(Perturbation, ModesAndSeeds) {
  const PeriodicGrid g(1, 32);
  const auto f = lab::make_perturbation(g, modes({1, 3}, 1e-3));
  const auto expected =
      SurfaceField::sample(g, [](double x, double) { return 1e-3 * (std::cos(x) + std::cos(3 * x) / 3.0); });
  EXPECT_LT(oracle::max_abs_diff(f, expected), 1e-18);
  EXPECT_TRUE(f.mean_zero());

  lab::PerturbationSpec seeded;
  seeded.seed = 17;
  seeded.amplitude = 2e-4;
  const auto a = lab::make_perturbation(g, seeded);
  const auto b = lab::make_perturbation(g, seeded);
  EXPECT_EQ(oracle::max_abs_diff(a, b), 0.0);
  EXPECT_NEAR(a.max_abs(), 2e-4, 1e-18);
  EXPECT_TRUE(a.mean_zero());
}

TEST(Remainder, VanishesAtZero) {
  const PeriodicGrid g(1, 32);
  Rng rng(50);
  const auto eta_star = scaled_random(g, rng, 0.2);
  const auto phi = spectral::project_mean_zero(scaled_random(g, rng, 0.2));
  const auto n0 = lab::nonlinear_remainder(SurfaceField(g), eta_star, phi, dn::FluidConfig::finite(1.0), kElliptic);
  EXPECT_EQ(n0.max_abs(), 0.0);
}

TEST(Remainder, IsQuadraticAtTheTrivialWave) {
  const PeriodicGrid g(1, 32);
  const auto phi = cosine(g, 1, 0.3);
  const auto cfg = dn::FluidConfig::finite(1.0);
  Rng rng(51);
  const auto f = spectral::project_mean_zero(scaled_random(g, rng, 1e-2, {6, 0.5}));
  const double base = hs(lab::nonlinear_remainder(f, -phi, phi, cfg, kElliptic), 2.5);
  for (double a : {0.5, 0.25}) {
    const double scaled = hs(lab::nonlinear_remainder(a * f, -phi, phi, cfg, kElliptic), 2.5);
    EXPECT_NEAR(scaled / base, a * a, 0.15 * a * a) << a;
  }

  // Log-log slope of ‖N(f)‖_{H^{s−1/2}} against ‖f‖_{H^s}.
  std::vector<double> x, y;
  for (double a : {1.0, 0.3, 0.1, 0.03}) {
    x.push_back(std::log(hs(a * f)));
    y.push_back(std::log(hs(lab::nonlinear_remainder(a * f, -phi, phi, cfg, kElliptic), 2.5)));
  }
  const double slope = (y.back() - y.front()) / (x.back() - x.front());
  EXPECT_GE(slope, 1.8);
}

TEST(Remainder, MatchesTheDirectlyAssembledPerturbationEquation) {
  const PeriodicGrid g(1, 32);
  const auto cfg = dn::FluidConfig::finite(1.0);
  Rng rng(52);
  const auto eta_star = scaled_random(g, rng, 0.2);
  const auto phi = spectral::project_mean_zero(scaled_random(g, rng, 0.2));
  const auto f = spectral::project_mean_zero(scaled_random(g, rng, 0.05));
  const double gamma = 0.3;
  const auto transport = gamma * spectral::derivative(f, {1, 0});
  const auto split = transport - dn::dn_apply(eta_star, f, cfg, kElliptic) +
                     lab::nonlinear_remainder(f, eta_star, phi, cfg, kElliptic);
  const auto direct = transport - dn::dn_apply(eta_star + f, eta_star + f + phi, cfg, kElliptic) +
                      dn::dn_apply(eta_star, eta_star + phi, cfg, kElliptic);
  EXPECT_LT(hs(split - direct, 2.0), 1e-10 * hs(direct, 2.0));
}

TEST(DecayExperiment, FlatStateDecaysAtTheFlatRate) {
  const PeriodicGrid g(1, 32);
  const auto cfg = dn::FluidConfig::finite(1.0);
  const SurfaceField phi(g);
  const auto rep = lab::decay_experiment(solve(phi, 0.0, cfg), phi, cfg, modes({1}, 1e-3), imex2(1e-2), 2.0, {},
                                         kElliptic);
  EXPECT_EQ(rep.verdict, lab::Verdict::kDecayed);
  EXPECT_NEAR(rep.rate, std::tanh(1.0), 0.02 * std::tanh(1.0));
  EXPECT_GE(rep.r2, 0.99);
  ASSERT_TRUE(rep.trajectory.has_value());
  EXPECT_EQ(rep.trajectory->records.size(), rep.times.size());

  // The fitted envelope dominates the window samples up to the fit residual.
  double worst = 0.0;
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    if (rep.times[i] < rep.fit_start) continue;
    const double bound = rep.prefactor * rep.initial_norm * std::exp(-rep.rate * rep.times[i]);
    worst = std::max(worst, std::log(rep.hs_norms[i] / bound));
  }
  EXPECT_LT(worst, 1e-2);
}

TEST(DecayExperiment, ZeroPerturbationIsInconclusive) {
  const PeriodicGrid g(1, 32);
  const auto cfg = dn::FluidConfig::finite(1.0);
  const SurfaceField phi(g);
  const auto rep = lab::decay_experiment(solve(phi, 0.0, cfg), phi, cfg, modes({1}, 0.0), imex2(1e-2), 1.0, {},
                                         kElliptic);
  EXPECT_EQ(rep.verdict, lab::Verdict::kInconclusive);
  EXPECT_FALSE(rep.note.empty());
}

TEST(DecayExperiment, AdmissionThresholdIsEnforced) {
  const PeriodicGrid g(1, 32);
  const auto cfg = dn::FluidConfig::finite(1.0);
  const SurfaceField phi(g);
  const auto wave = solve(phi, 0.0, cfg);
  expect_error(ErrorCode::kInvalidArgument, [&] {
    lab::decay_experiment(wave, phi, cfg, modes({1}, 0.1), imex2(1e-2), 1.0, {}, kElliptic);
  });
  auto loose = modes({1}, 0.1);
  loose.admission_threshold = 0.2;
  EXPECT_NO_THROW(lab::decay_experiment(wave, phi, cfg, loose, imex2(1e-2), 0.1, {}, kElliptic));
}

class ComputedWave : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    grid_ = new PeriodicGrid(1, 32);
    phi_ = new SurfaceField(cosine(*grid_, 1, 0.5));
    wave_ = new tw::TravelingWaveSolution(solve(*phi_, 0.05, cfg()));
  }
  static void TearDownTestSuite() {
    delete wave_;
    delete phi_;
    delete grid_;
  }
  static dn::FluidConfig cfg() { return dn::FluidConfig::finite(1.0); }

  static PeriodicGrid* grid_;
  static SurfaceField* phi_;
  static tw::TravelingWaveSolution* wave_;
};

PeriodicGrid* ComputedWave::grid_ = nullptr;
SurfaceField* ComputedWave::phi_ = nullptr;
tw::TravelingWaveSolution* ComputedWave::wave_ = nullptr;

TEST_F(ComputedWave, SmallPerturbationsDecay) {
  const auto rep =
      lab::decay_experiment(*wave_, *phi_, cfg(), modes({1, 2, 3}, 1e-3), imex2(2e-2), 6.0, {}, kElliptic);
  EXPECT_EQ(rep.verdict, lab::Verdict::kDecayed) << rep.note;
  EXPECT_GT(rep.rate, 0.0);
  EXPECT_GE(rep.r2, 0.99);
}

TEST_F(ComputedWave, LinearRegimeDecaysMonotonically) {
  const auto rep =
      lab::decay_experiment(*wave_, *phi_, cfg(), modes({1, 2, 3}, 1e-5), imex2(2e-2), 2.0, {}, kElliptic);
  for (std::size_t i = 6; i < rep.hs_norms.size(); ++i) EXPECT_LE(rep.hs_norms[i], rep.hs_norms[i - 1]) << i;
}

TEST_F(ComputedWave, RateIsTranslationEquivariant) {
  const double shift = 0.7;
  const auto base =
      lab::decay_experiment(*wave_, *phi_, cfg(), modes({1, 2}, 1e-4), imex2(2e-2), 3.0, {}, kElliptic);
  auto moved = *wave_;
  moved.eta = spectral::translate(wave_->eta, shift);
  const auto rep = lab::decay_experiment(moved, spectral::translate(*phi_, shift), cfg(), modes({1, 2}, 1e-4, shift),
                                         imex2(2e-2), 3.0, {}, kElliptic);
  EXPECT_NEAR(rep.rate, base.rate, 1e-6 * base.rate);
}

TEST(ThresholdScan, TrivialAndLinearRegime) {
  const PeriodicGrid g(1, 32);
  const auto cfg = dn::FluidConfig::finite(1.0);
  const SurfaceField phi(g);
  const auto wave = solve(phi, 0.0, cfg);
  const auto shape = modes({1}, 1.0);

  const auto trivial = lab::stability_threshold_scan(wave, phi, cfg, {0.0}, shape, imex2(2e-2), 1.0, {}, kElliptic);
  ASSERT_EQ(trivial.rows.size(), 1u);
  EXPECT_EQ(trivial.rows[0].verdict, lab::Verdict::kInconclusive);
  EXPECT_EQ(trivial.margin, 0.0);

  const std::vector<double> amps{1e-6, 1e-5, 5e-5};
  const auto scan = lab::stability_threshold_scan(wave, phi, cfg, amps, shape, imex2(2e-2), 2.0, {}, kElliptic);
  ASSERT_EQ(scan.rows.size(), amps.size());
  for (const auto& row : scan.rows) EXPECT_EQ(row.verdict, lab::Verdict::kDecayed) << row.amplitude;
  EXPECT_DOUBLE_EQ(scan.margin, 5e-5);
}

TEST(LinearDecay, FlatRateAndTransportInvariance) {
  const PeriodicGrid g(1, 32);
  const auto cfg = dn::FluidConfig::finite(1.0);
  const auto g0 = cosine(g, 1);
  const auto still = lab::linear_decay_experiment(SurfaceField(g), 0.0, cfg, g0, imex2(1e-2), 2.0, {}, kElliptic);
  EXPECT_NEAR(still.rate, std::tanh(1.0), 1e-10);
  const auto moving = lab::linear_decay_experiment(SurfaceField(g), 0.1, cfg, g0, imex2(1e-2), 2.0, {}, kElliptic);
  EXPECT_NEAR(moving.rate, still.rate, 1e-10);
}

TEST(LinearDecay, RateDominatesTheCoercivityInfimum) {
  const PeriodicGrid g(1, 32);
  const auto cfg = dn::FluidConfig::finite(1.0);
  Rng rng(53);
  for (int trial = 0; trial < 3; ++trial) {
    // ‖∇η*‖_∞ ≤ 0.5.
    const auto r = random_smooth_field(g, rng, {4, 0.5});
    const auto eta_star = (0.5 / spectral::derivative(r, {1, 0}).max_abs()) * r;
    const auto op = dn::freeze(*dn::make_dn_operator(eta_star, cfg, kElliptic));
    const double m = dn::coercivity_infimum(*op);
    ASSERT_GT(m, 0.0);
    const auto g0 = random_smooth_field(g, rng).without_mean();
    for (double gamma : {0.0, 0.1}) {
      const auto rep = lab::linear_decay_experiment(eta_star, gamma, cfg, g0, imex2(2e-2), 8.0, {}, kElliptic);
      // Several modes with distinct rates bend the log-norm, so only the rate is checked.
      EXPECT_GT(rep.rate, 0.0) << trial;
      EXPECT_GE(rep.rate, m) << trial << " " << gamma;
    }
  }
}

}  // namespace
}  // namespace waves
