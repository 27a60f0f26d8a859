#include "waves/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "waves/error.hpp"

namespace waves::spectral {
namespace {

Complex ik_power(int k, int power, const PeriodicGrid& grid) {
  if (power == 0) return 1.0;
  if ((power % 2) == 1 && grid.is_nyquist(k)) return 0.0;
  Complex r = 1.0;
  const Complex ik(0.0, static_cast<double>(k));
  for (int p = 0; p < power; ++p) r *= ik;
  return r;
}

double modulus(const Wavevector& k) {
  return std::sqrt(static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1]);
}

}  // namespace

SurfaceField apply_multiplier(const SurfaceField& f, const std::function<Complex(const Wavevector&)>& m) {
  const auto& grid = f.grid();
  std::vector<Complex> coeffs(f.coeffs().begin(), f.coeffs().end());
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] *= m(grid.wavevector(i));
  return SurfaceField::from_coefficients(grid, std::move(coeffs));
}

SurfaceField derivative(const SurfaceField& f, MultiIndex alpha) {
  if (alpha.a1 < 0 || alpha.a2 < 0) raise(ErrorCode::kInvalidArgument, "negative derivative order");
  if (alpha.order() > kMaxDerivativeOrder) {
    raise(ErrorCode::kOrderTooHigh, "derivative order " + std::to_string(alpha.order()) + " exceeds 6");
  }
  if (alpha.a2 > 0 && f.grid().dim() == 1) {
    raise(ErrorCode::kInvalidArgument, "∂₂ requested on a one-dimensional grid");
  }
  if (alpha.order() == 0) return f;
  const auto& grid = f.grid();
  return apply_multiplier(f, [&](const Wavevector& k) {
    return ik_power(k[0], alpha.a1, grid) * ik_power(k[1], alpha.a2, grid);
  });
}

std::vector<SurfaceField> gradient(const SurfaceField& f) {
  std::vector<SurfaceField> g;
  g.push_back(derivative(f, {1, 0}));
  if (f.grid().dim() == 2) g.push_back(derivative(f, {0, 1}));
  return g;
}

SurfaceField laplacian(const SurfaceField& f) {
  return apply_multiplier(f, [](const Wavevector& k) {
    return Complex(-static_cast<double>(k[0]) * k[0] - static_cast<double>(k[1]) * k[1], 0.0);
  });
}

double sobolev_norm(const SurfaceField& f, SobolevIndex idx) {
  if (!(idx.s >= -2.0 && idx.s <= 12.0)) {
    raise(ErrorCode::kInvalidArgument, "Sobolev exponent outside [-2, 12]: " + std::to_string(idx.s));
  }
  const auto& grid = f.grid();
  const auto coeffs = f.coeffs();
  double sum = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const auto k = grid.wavevector(i);
    const double k2 = static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1];
    double w;
    if (idx.homogeneous) {
      if (k2 == 0.0) continue;
      w = std::pow(k2, idx.s);
    } else {
      w = std::pow(1.0 + k2, idx.s);
    }
    sum += w * std::norm(coeffs[i]);
  }
  return std::sqrt(sum);
}

double l2_norm(const SurfaceField& f) {
  double sum = 0.0;
  for (const auto& c : f.coeffs()) sum += std::norm(c);
  return std::sqrt(sum);
}

double dot_h_half_norm(const SurfaceField& f, HalfNormWeight weight) {
  const auto& grid = f.grid();
  const auto coeffs = f.coeffs();
  double sum = 0.0;
  for (std::size_t i = 1; i < coeffs.size(); ++i) {
    const double km = modulus(grid.wavevector(i));
    if (km == 0.0) continue;
    sum += (weight == HalfNormWeight::kModulus ? km : km * km) * std::norm(coeffs[i]);
  }
  return std::sqrt(sum);
}

double inner_product(const SurfaceField& f, const SurfaceField& g) {
  if (!(f.grid() == g.grid())) raise(ErrorCode::kInvalidArgument, "fields live on different grids");
  double sum = 0.0;
  for (std::size_t i = 0; i < f.grid().size(); ++i) sum += f.value(i) * g.value(i);
  return sum / static_cast<double>(f.grid().size());
}

SurfaceField dealias(const SurfaceField& f, DealiasRule rule) {
  if (rule == DealiasRule::kNone) return f;
  const double cutoff = (2.0 / 3.0) * (f.grid().n() / 2);
  return apply_multiplier(f, [cutoff](const Wavevector& k) {
    return (std::abs(k[0]) > cutoff || std::abs(k[1]) > cutoff) ? Complex{} : Complex{1.0};
  });
}

SurfaceField project_mean_zero(const SurfaceField& f) { return f.without_mean(); }

double w_infinity_norm(const SurfaceField& f, int order) {
  if (order < 0 || order > kMaxDerivativeOrder) raise(ErrorCode::kOrderTooHigh, "W^{k,inf} order out of range");
  double total = 0.0;
  for (int j = 0; j <= order; ++j) {
    double best = 0.0;
    const int a2max = f.grid().dim() == 2 ? j : 0;
    for (int a2 = 0; a2 <= a2max; ++a2) {
      best = std::max(best, derivative(f, {j - a2, a2}).max_abs());
    }
    total += best;
  }
  return total;
}

SurfaceField translate(const SurfaceField& f, double shift) {
  const auto& grid = f.grid();
  return apply_multiplier(f, [&](const Wavevector& k) {
    if (grid.is_nyquist(k[0])) return Complex(std::cos(k[0] * shift), 0.0);
    return std::polar(1.0, -static_cast<double>(k[0]) * shift);
  });
}

}  // namespace waves::spectral
