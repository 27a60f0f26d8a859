#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "waves/grid.hpp"

namespace waves {

using Complex = std::complex<double>;

/// Real periodic scalar field carrying both its grid samples and its Fourier
/// coefficients (full layout, Parseval-normalized; see spectral::forward).
///
/// Immutable once built: every operation returns a new field, so fields can
/// be shared freely across threads.
class SurfaceField {
 public:
  explicit SurfaceField(const PeriodicGrid& grid);  // zero field

  static SurfaceField from_values(const PeriodicGrid& grid, std::vector<double> values);

  /// Coefficients are synthesized, and the stored coefficients recomputed
  /// from the resulting real samples (Hermitian projection).
  static SurfaceField from_coefficients(const PeriodicGrid& grid, std::vector<Complex> coeffs);

  static SurfaceField constant(const PeriodicGrid& grid, double value);

  /// Samples f(x₁, x₂) at the grid nodes (x₂ = 0 when d = 1).
  static SurfaceField sample(const PeriodicGrid& grid,
                             const std::function<double(double, double)>& f);

  const PeriodicGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  double value(std::size_t i) const { return values_[i]; }
  Complex coeff(std::size_t i) const { return coeffs_[i]; }

  double mean() const noexcept { return coeffs_[0].real(); }

  /// |f̂(0)| ≤ 1e−12·‖f‖_{L²}, cached at construction.
  bool mean_zero() const noexcept { return mean_zero_; }

  double max_abs() const noexcept;
  double min_value() const noexcept;
  double max_value() const noexcept;

  /// Subtracts the mean from the samples and sets f̂(0) to exactly zero.
  SurfaceField without_mean() const;

  SurfaceField operator-() const;
  friend SurfaceField operator+(const SurfaceField& a, const SurfaceField& b);
  friend SurfaceField operator-(const SurfaceField& a, const SurfaceField& b);
  friend SurfaceField operator*(double a, const SurfaceField& f);
  friend SurfaceField operator*(const SurfaceField& f, double a) { return a * f; }

  /// a·x + y without a transform.
  static SurfaceField axpy(double a, const SurfaceField& x, const SurfaceField& y);

 private:
  SurfaceField(const PeriodicGrid& grid, std::vector<double> values, std::vector<Complex> coeffs);

  PeriodicGrid grid_;
  std::vector<double> values_;
  std::vector<Complex> coeffs_;
  bool mean_zero_ = true;
};

/// Pointwise product, evaluated on the grid (no dealiasing).
SurfaceField multiply(const SurfaceField& a, const SurfaceField& b);

/// Pointwise map on the grid samples.
SurfaceField map_values(const SurfaceField& f, const std::function<double(double)>& op);

}  // namespace waves
