#include <cmath>

#include <benchmark/benchmark.h>

#include "waves/dn_operator.hpp"
#include "waves/random_field.hpp"
#include "waves/spectral.hpp"
#include "waves/traveling_wave.hpp"

namespace {

using namespace waves;

SurfaceField surface(const PeriodicGrid& g, double sup) {
  Rng rng(1);
  const auto f = random_smooth_field(g, rng, {8, 0.5});
  return (sup / f.max_abs()) * f;
}

SurfaceField data(const PeriodicGrid& g) {
  Rng rng(2);
  return random_smooth_field(g, rng, {16, 0.3});
}

// Forward and inverse transform via a derivative round trip.
void BM_Derivative(benchmark::State& state) {
  const PeriodicGrid g(1, static_cast<int>(state.range(0)));
  const auto f = data(g);
  for (auto _ : state) benchmark::DoNotOptimize(spectral::derivative(f, {1, 0}));
}
BENCHMARK(BM_Derivative)->RangeMultiplier(4)->Range(64, 4096);

void BM_FlatSymbol(benchmark::State& state) {
  const PeriodicGrid g(1, static_cast<int>(state.range(0)));
  const auto f = data(g);
  const auto cfg = dn::FluidConfig::finite(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(dn::dn_flat(f, cfg));
}
BENCHMARK(BM_FlatSymbol)->RangeMultiplier(4)->Range(64, 4096);

void BM_CraigSulem(benchmark::State& state) {
  const PeriodicGrid g(1, 128);
  const auto eta = surface(g, 0.05);
  const auto f = data(g);
  const auto cfg = dn::FluidConfig::finite(1.0);
  const dn::CraigSulem params{static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(dn::dn_craig_sulem(eta, f, cfg, params));
}
BENCHMARK(BM_CraigSulem)->DenseRange(1, 8, 1);

void BM_MappedElliptic(benchmark::State& state) {
  const PeriodicGrid g(1, static_cast<int>(state.range(0)));
  const auto eta = surface(g, 0.3);
  const auto f = data(g);
  const auto cfg = dn::FluidConfig::finite(1.0);
  const dn::MappedElliptic params{static_cast<int>(state.range(1))};
  for (auto _ : state) benchmark::DoNotOptimize(dn::dn_elliptic(eta, f, cfg, params));
}
BENCHMARK(BM_MappedElliptic)->Args({64, 24})->Args({128, 32})->Args({128, 64})->Unit(benchmark::kMillisecond);

void BM_FrozenApply(benchmark::State& state) {
  const PeriodicGrid g(1, 128);
  const auto op = dn::freeze(*dn::make_dn_operator(surface(g, 0.3), dn::FluidConfig::finite(1.0), dn::MappedElliptic{32}));
  const auto f = data(g);
  for (auto _ : state) benchmark::DoNotOptimize(op->apply(f));
}
BENCHMARK(BM_FrozenApply);

// One Picard step of the traveling-wave map near its fixed point.
void BM_FixedPointMap(benchmark::State& state) {
  const PeriodicGrid g(1, 64);
  const auto phi = SurfaceField::sample(g, [](double x, double) { return 0.5 * std::cos(x); });
  const tw::FixedPointMap map(phi, dn::FluidConfig::finite(1.0), dn::MappedElliptic{24});
  const auto zeta = map(SurfaceField(g), 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(map(zeta, 0.05));
}
BENCHMARK(BM_FixedPointMap)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
