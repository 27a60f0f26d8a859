#pragma once

#include <cstdint>
#include <random>

#include "waves/field.hpp"

namespace waves {

/// Seeded generator with a platform-independent mapping from engine bits to
/// doubles (std:: distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// Band-limited random field: Fourier amplitudes are Gaussian with envelope
/// exp(−decay·|k|) on 1 ≤ |k_j| ≤ max_mode; the zero mode is left empty.
struct RandomFieldSpec {
  int max_mode = 8;
  double decay = 0.5;
};

SurfaceField random_smooth_field(const PeriodicGrid& grid, Rng& rng, RandomFieldSpec spec = {});

}  // namespace waves
