#include "waves/grid.hpp"

#include <string>

#include "waves/error.hpp"

namespace waves {

PeriodicGrid::PeriodicGrid(int dim, int n) : dim_(dim), n_(n), size_(0) {
  if (dim != 1 && dim != 2) {
    raise(ErrorCode::kInvalidArgument, "grid dimension must be 1 or 2, got " + std::to_string(dim));
  }
  if (n < 8 || (n & (n - 1)) != 0) {
    raise(ErrorCode::kInvalidArgument,
          "grid resolution must be a power of two >= 8, got " + std::to_string(n));
  }
  size_ = dim == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * n;
}

std::size_t PeriodicGrid::half_size() const noexcept {
  const auto half = static_cast<std::size_t>(n_ / 2 + 1);
  return dim_ == 1 ? half : half * static_cast<std::size_t>(n_);
}

Wavevector PeriodicGrid::wavevector(std::size_t flat) const noexcept {
  const auto n = static_cast<std::size_t>(n_);
  if (dim_ == 1) return {wavenumber(static_cast<int>(flat)), 0};
  return {wavenumber(static_cast<int>(flat % n)), wavenumber(static_cast<int>(flat / n))};
}

Wavevector PeriodicGrid::half_wavevector(std::size_t flat) const noexcept {
  const auto half = static_cast<std::size_t>(n_ / 2 + 1);
  if (dim_ == 1) return {static_cast<int>(flat), 0};
  return {static_cast<int>(flat % half), wavenumber(static_cast<int>(flat / half))};
}

}  // namespace waves
