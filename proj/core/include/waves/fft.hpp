#pragma once

#include <complex>
#include <span>

#include "waves/grid.hpp"

namespace waves::spectral {

using Complex = std::complex<double>;

/// Forward transform, full layout: f̂(k) = N⁻¹ Σ_x f(x) e^{−ik·x}, so that
/// Σ_k |f̂(k)|² equals the grid mean of f². This is the single Fourier
/// convention used everywhere in the library.
void forward(const PeriodicGrid& grid, std::span<const double> values, std::span<Complex> coeffs);

/// Inverse of forward(). The imaginary part of the synthesis is discarded, so
/// non-Hermitian input is projected onto its Hermitian part.
void inverse(const PeriodicGrid& grid, std::span<const Complex> coeffs, std::span<double> values);

/// Real-to-complex transforms of `rows` contiguous grid fields at once, in
/// the half-spectrum layout of PeriodicGrid::half_wavevector. Same
/// normalization as forward(). Used by the mapped elliptic solver, which
/// transforms every vertical level per Krylov iteration.
class BatchedRealFft {
 public:
  BatchedRealFft(const PeriodicGrid& grid, int rows);

  void forward(const double* in, Complex* out) const;

  /// Overwrites `in` (FFTW's multi-dimensional c2r cannot preserve input).
  void inverse(Complex* in, double* out) const;

  int rows() const noexcept { return rows_; }

 private:
  PeriodicGrid grid_;
  int rows_;
  void* forward_plan_;
  void* inverse_plan_;
};

}  // namespace waves::spectral
