#include "waves/random_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace waves {

double Rng::normal() {
  // Box–Muller; u1 is kept away from zero.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

SurfaceField random_smooth_field(const PeriodicGrid& grid, Rng& rng, RandomFieldSpec spec) {
  const int limit = std::min(spec.max_mode, grid.n() / 2 - 1);
  // Build with explicit cosine/sine pairs so the draw order does not depend
  // on the FFT layout.
  std::vector<double> values(grid.size(), 0.0);
  const int n = grid.n();
  const int k2max = grid.dim() == 2 ? limit : 0;
  for (int k2 = -k2max; k2 <= k2max; ++k2) {
    for (int k1 = 0; k1 <= limit; ++k1) {
      if (k1 == 0 && k2 <= 0) continue;  // one of each ±k pair, skip k = 0
      const double km = std::sqrt(static_cast<double>(k1 * k1 + k2 * k2));
      const double envelope = std::exp(-spec.decay * km);
      const double a = envelope * rng.normal();
      const double b = envelope * rng.normal();
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const int i0 = static_cast<int>(i % static_cast<std::size_t>(n));
        const int i1 = grid.dim() == 1 ? 0 : static_cast<int>(i / static_cast<std::size_t>(n));
        const double phase = k1 * grid.coordinate(i0) + k2 * grid.coordinate(i1);
        values[i] += a * std::cos(phase) + b * std::sin(phase);
      }
    }
  }
  return SurfaceField::from_values(grid, std::move(values)).without_mean();
}

}  // namespace waves
