#pragma once

#include <cmath>

#include <gtest/gtest.h>

#include "waves/error.hpp"
#include "waves/field.hpp"
#include "waves/random_field.hpp"
#include "waves/spectral.hpp"

namespace waves::testing {

inline SurfaceField cosine(const PeriodicGrid& g, int k, double a = 1.0) {
  return SurfaceField::sample(g, [=](double x, double) { return a * std::cos(k * x); });
}

inline SurfaceField scaled_random(const PeriodicGrid& g, Rng& rng, double sup, RandomFieldSpec spec = {}) {
  const auto f = random_smooth_field(g, rng, spec);
  return (sup / f.max_abs()) * f;
}

inline double hs(const SurfaceField& f, double s = 3.0) { return spectral::sobolev_norm(f, {s, false}); }

inline double rel_hs(const SurfaceField& a, const SurfaceField& b, double s = 3.0) { return hs(a - b, s) / hs(b, s); }

template <class F>
void expect_error(ErrorCode code, F&& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace waves::testing
