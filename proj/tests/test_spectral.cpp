#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "waves/error.hpp"
#include "waves/fft.hpp"
#include "waves/random_field.hpp"
#include "waves/spectral.hpp"

namespace waves {
namespace {

using std::numbers::pi;

SurfaceField random_values(const PeriodicGrid& grid, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(grid.size());
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return SurfaceField::from_values(grid, std::move(v));
}

template <class F>
void expect_error(ErrorCode code, F&& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

TEST(Grid, RejectsBadShapes) {
  expect_error(ErrorCode::kInvalidArgument, [] { PeriodicGrid(1, 12); });
  expect_error(ErrorCode::kInvalidArgument, [] { PeriodicGrid(3, 16); });
  expect_error(ErrorCode::kInvalidArgument, [] { PeriodicGrid(1, 4); });
}

TEST(Grid, WavenumberLayout) {
  const PeriodicGrid g(2, 8);
  EXPECT_EQ(g.size(), 64u);
  EXPECT_EQ(g.wavenumber(3), 3);
  EXPECT_EQ(g.wavenumber(4), -4);
  EXPECT_EQ(g.wavenumber(7), -1);
  const Wavevector k = g.wavevector(7 + 8 * 5);
  EXPECT_EQ(k[0], -1);
  EXPECT_EQ(k[1], -3);
  EXPECT_TRUE(g.is_nyquist(-4));
  EXPECT_DOUBLE_EQ(g.coordinate(2), 2 * (2 * pi / 8));
}

TEST(Fft, MatchesDirectSum1d) {
  const PeriodicGrid g(1, 32);
  const auto f = random_values(g, 7);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Wavevector k = g.wavevector(i);
    EXPECT_NEAR(std::abs(f.coeff(i) - oracle::dft(f, k[0], k[1])), 0.0, 1e-14);
  }
}

TEST(Fft, MatchesDirectSum2d) {
  const PeriodicGrid g(2, 16);
  const auto f = random_values(g, 11);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Wavevector k = g.wavevector(i);
    EXPECT_NEAR(std::abs(f.coeff(i) - oracle::dft(f, k[0], k[1])), 0.0, 1e-14);
  }
}

TEST(Fft, BatchedRealMatchesComplex) {
  const PeriodicGrid g(1, 16);
  const int rows = 3;
  std::vector<double> data(rows * g.size());
  Rng rng(3);
  for (double& x : data) x = rng.normal();
  spectral::BatchedRealFft fft(g, rows);
  std::vector<Complex> half(rows * g.half_size());
  fft.forward(data.data(), half.data());
  for (int r = 0; r < rows; ++r) {
    const auto f = SurfaceField::from_values(g, {data.begin() + r * g.size(), data.begin() + (r + 1) * g.size()});
    for (std::size_t j = 0; j < g.half_size(); ++j)
      EXPECT_NEAR(std::abs(half[r * g.half_size() + j] - f.coeff(j)), 0.0, 1e-14);
  }
  std::vector<double> back(data.size());
  fft.inverse(half.data(), back.data());
  for (std::size_t i = 0; i < data.size(); ++i) EXPECT_NEAR(back[i], data[i], 1e-14);
}

TEST(Field, CoefficientRoundTrip) {
  const PeriodicGrid g(1, 16);
  const auto f = random_values(g, 5);
  const auto h = SurfaceField::from_coefficients(g, {f.coeffs().begin(), f.coeffs().end()});
  EXPECT_LT(oracle::max_abs_diff(f, h), 1e-14);
}

TEST(Field, WithoutMeanZeroesTheMeanExactly) {
  const PeriodicGrid g(1, 16);
  const auto f = random_values(g, 9) + SurfaceField::constant(g, 3.0);
  EXPECT_FALSE(f.mean_zero());
  const auto p = spectral::project_mean_zero(f);
  EXPECT_EQ(p.coeff(0), Complex(0.0, 0.0));
  EXPECT_TRUE(p.mean_zero());
  EXPECT_LT(oracle::max_abs_diff(p + SurfaceField::constant(g, f.mean()), f), 1e-14);
}

TEST(Field, WithoutMeanSurvivesCancellation) {
  // Two nearly equal mean-free fields: their difference must come out mean-free
  // relative to its own size, not to the size of the operands.
  const PeriodicGrid g(1, 64);
  Rng rng(4);
  const auto a = random_smooth_field(g, rng).without_mean();
  const auto b = (a + 1e-9 * random_smooth_field(g, rng)).without_mean();
  const auto d = (b - a).without_mean();
  double sum = 0.0;
  for (double v : d.values()) sum += v;
  EXPECT_LT(std::abs(sum) / static_cast<double>(g.size()), 1e-14 * d.max_abs());
}

TEST(Field, ArithmeticMatchesPointwise) {
  const PeriodicGrid g(1, 16);
  const auto a = random_values(g, 1);
  const auto b = random_values(g, 2);
  const auto c = SurfaceField::axpy(2.0, a, b);
  const auto p = multiply(a, b);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_DOUBLE_EQ(c.value(i), 2.0 * a.value(i) + b.value(i));
    EXPECT_DOUBLE_EQ(p.value(i), a.value(i) * b.value(i));
  }
}

TEST(Derivative, SineAndMixed) {
  const PeriodicGrid g1(1, 32);
  const auto s = SurfaceField::sample(g1, [](double x, double) { return std::sin(3 * x); });
  const auto ds = spectral::derivative(s, {1, 0});
  EXPECT_LT(oracle::max_abs_diff(ds, SurfaceField::sample(g1, [](double x, double) { return 3 * std::cos(3 * x); })),
            1e-13);

  const PeriodicGrid g2(2, 16);
  const auto f = SurfaceField::sample(g2, [](double x, double y) { return std::sin(x) * std::sin(2 * y); });
  const auto d = spectral::derivative(f, {1, 1});
  EXPECT_LT(oracle::max_abs_diff(d, SurfaceField::sample(g2, [](double x, double y) { return 2 * std::cos(x) * std::cos(2 * y); })),
            1e-13);
  const auto lap = spectral::laplacian(f);
  EXPECT_LT(oracle::max_abs_diff(lap, -5.0 * f), 1e-12);
}

TEST(Derivative, OrderLimitAndNyquist) {
  const PeriodicGrid g(1, 8);
  const auto f = SurfaceField::sample(g, [](double x, double) { return std::cos(4 * x); });
  expect_error(ErrorCode::kOrderTooHigh, [&] { spectral::derivative(f, {7, 0}); });
  EXPECT_LT(spectral::derivative(f, {1, 0}).max_abs(), 1e-14);
  EXPECT_LT(oracle::max_abs_diff(spectral::derivative(f, {2, 0}), -16.0 * f), 1e-12);
}

TEST(Norms, MatchDirectSums) {
  const PeriodicGrid g(1, 32);
  Rng rng(21);
  const auto f = random_smooth_field(g, rng);
  for (double s : {-1.0, 0.0, 0.5, 1.5, 3.0}) {
    EXPECT_NEAR(spectral::sobolev_norm(f, {s, false}), oracle::hs_norm(f, s), 1e-12 * oracle::hs_norm(f, s)) << s;
  }
  EXPECT_NEAR(spectral::l2_norm(f), oracle::l2_norm(f), 1e-14);
  const double hom = std::sqrt(oracle::weighted_sum(f, [](int a, int) { return a == 0 ? 0.0 : std::pow(a * a, 1.5); }));
  EXPECT_NEAR(spectral::sobolev_norm(f, {1.5, true}), hom, 1e-12 * hom);
  const double half = std::sqrt(oracle::weighted_sum(f, [](int a, int) { return std::abs(a); }));
  EXPECT_NEAR(spectral::dot_h_half_norm(f), half, 1e-13);
  const double half_sq = std::sqrt(oracle::weighted_sum(f, [](int a, int) { return a * a; }));
  EXPECT_NEAR(spectral::dot_h_half_norm(f, HalfNormWeight::kModulusSquared), half_sq, 1e-13);
}

TEST(Norms, CosineAnchors) {
  const PeriodicGrid g(1, 16);
  const auto c = SurfaceField::sample(g, [](double x, double) { return std::cos(x); });
  EXPECT_NEAR(spectral::l2_norm(c), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(spectral::sobolev_norm(c, {3.0, false}), std::sqrt(0.5 * 8.0), 1e-14);
  expect_error(ErrorCode::kInvalidArgument, [&] { spectral::sobolev_norm(c, {13.0, false}); });
}

TEST(Norms, InnerProductIsGridMean) {
  const PeriodicGrid g(2, 8);
  const auto a = random_values(g, 4);
  const auto b = random_values(g, 6);
  double mean = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) mean += a.value(i) * b.value(i);
  mean /= static_cast<double>(g.size());
  EXPECT_NEAR(spectral::inner_product(a, b), mean, 1e-15);
}

TEST(Dealias, TwoThirdsCutoff) {
  const PeriodicGrid g(1, 32);
  // (2/3)(16) ≈ 10.67: mode 10 survives, mode 11 is removed.
  const auto f = SurfaceField::sample(g, [](double x, double) { return std::cos(10 * x) + std::cos(11 * x); });
  const auto d = spectral::dealias(f, DealiasRule::kTwoThirds);
  EXPECT_LT(oracle::max_abs_diff(d, SurfaceField::sample(g, [](double x, double) { return std::cos(10 * x); })), 1e-14);
  EXPECT_LT(oracle::max_abs_diff(spectral::dealias(f, DealiasRule::kNone), f), 1e-15);
}

TEST(Translate, ShiftsResolvedModes) {
  const PeriodicGrid g(1, 32);
  const double a = 0.37;
  const auto f = SurfaceField::sample(g, [](double x, double) { return std::cos(2 * x) + std::sin(5 * x); });
  const auto expected = SurfaceField::sample(g, [a](double x, double) { return std::cos(2 * (x - a)) + std::sin(5 * (x - a)); });
  EXPECT_LT(oracle::max_abs_diff(spectral::translate(f, a), expected), 1e-13);
}

TEST(WInfinity, SumsDerivativeMaxima) {
  const PeriodicGrid g(1, 64);
  const auto f = SurfaceField::sample(g, [](double x, double) { return std::sin(2 * x); });
  EXPECT_NEAR(spectral::w_infinity_norm(f, 0), 1.0, 1e-12);
  EXPECT_NEAR(spectral::w_infinity_norm(f, 2), 1.0 + 2.0 + 4.0, 1e-11);
}

TEST(RandomField, DeterministicAndMeanZero) {
  const PeriodicGrid g(2, 16);
  Rng a(99), b(99);
  const auto f = random_smooth_field(g, a);
  const auto h = random_smooth_field(g, b);
  EXPECT_EQ(oracle::max_abs_diff(f, h), 0.0);
  EXPECT_TRUE(f.mean_zero());
  EXPECT_GT(f.max_abs(), 0.0);
}

// Parseval and the commutation of derivatives with translations hold for
// any field; exercised on a batch of random ones.
TEST(SpectralProperties, ParsevalAndTranslationEquivariance) {
  const PeriodicGrid g(1, 64);
  Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_smooth_field(g, rng);
    double sum = 0.0;
    for (const Complex& c : f.coeffs()) sum += std::norm(c);
    EXPECT_NEAR(sum, oracle::l2_norm(f) * oracle::l2_norm(f), 1e-14);
    const double shift = rng.uniform(0.0, 2 * pi);
    const auto lhs = spectral::derivative(spectral::translate(f, shift), {2, 0});
    const auto rhs = spectral::translate(spectral::derivative(f, {2, 0}), shift);
    EXPECT_LT(oracle::max_abs_diff(lhs, rhs), 1e-12);
  }
}

}  // namespace
}  // namespace waves
