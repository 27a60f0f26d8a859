#pragma once

#include <array>
#include <cstddef>
#include <numbers>

namespace waves {

/// Wavevector; the second component is unused (zero) when d = 1.
using Wavevector = std::array<int, 2>;

/// Uniform collocation grid on the torus [0, 2π)^d, d ∈ {1, 2}.
///
/// Samples are stored with axis 0 (the propagation direction x₁) varying
/// fastest: flat index = i0 + n·i1. Wavenumbers along each axis are the
/// integers in [−n/2, n/2).
class PeriodicGrid {
 public:
  PeriodicGrid(int dim, int n);

  int dim() const noexcept { return dim_; }
  int n() const noexcept { return n_; }
  std::size_t size() const noexcept { return size_; }

  /// Number of complex coefficients in the half-spectrum (real-to-complex)
  /// layout: n/2+1 along axis 0, n along axis 1.
  std::size_t half_size() const noexcept;

  double spacing() const noexcept { return 2.0 * std::numbers::pi / n_; }
  double coordinate(int index) const noexcept { return index * spacing(); }

  /// Signed wavenumber for an FFT index in [0, n).
  int wavenumber(int index) const noexcept { return index < n_ / 2 ? index : index - n_; }

  /// Wavevector of a flat index in the full (complex-to-complex) layout.
  Wavevector wavevector(std::size_t flat) const noexcept;

  /// Wavevector of a flat index in the half-spectrum layout.
  Wavevector half_wavevector(std::size_t flat) const noexcept;

  /// True if any component sits on the Nyquist frequency −n/2 (or +n/2 in
  /// the half layout). Odd-order derivatives are zeroed there.
  bool is_nyquist(int k) const noexcept { return k == -n_ / 2 || k == n_ / 2; }

  friend bool operator==(const PeriodicGrid&, const PeriodicGrid&) = default;

 private:
  int dim_;
  int n_;
  std::size_t size_;
};

}  // namespace waves
