#include "waves/field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "waves/error.hpp"
#include "waves/fft.hpp"

namespace waves {
namespace {

void require_same_grid(const SurfaceField& a, const SurfaceField& b) {
  if (!(a.grid() == b.grid())) raise(ErrorCode::kInvalidArgument, "fields live on different grids");
}

}  // namespace

SurfaceField::SurfaceField(const PeriodicGrid& grid)
    : grid_(grid), values_(grid.size(), 0.0), coeffs_(grid.size(), Complex{}) {}

SurfaceField::SurfaceField(const PeriodicGrid& grid, std::vector<double> values,
                           std::vector<Complex> coeffs)
    : grid_(grid), values_(std::move(values)), coeffs_(std::move(coeffs)) {
  double energy = 0.0;
  for (const auto& c : coeffs_) energy += std::norm(c);
  mean_zero_ = std::abs(coeffs_[0]) <= 1e-12 * std::sqrt(energy);
}

SurfaceField SurfaceField::from_values(const PeriodicGrid& grid, std::vector<double> values) {
  if (values.size() != grid.size()) raise(ErrorCode::kInvalidArgument, "sample count does not match grid");
  for (double v : values) {
    if (!std::isfinite(v)) raise(ErrorCode::kInvalidArgument, "non-finite sample");
  }
  std::vector<Complex> coeffs(grid.size());
  spectral::forward(grid, values, coeffs);
  return SurfaceField(grid, std::move(values), std::move(coeffs));
}

SurfaceField SurfaceField::from_coefficients(const PeriodicGrid& grid, std::vector<Complex> coeffs) {
  if (coeffs.size() != grid.size()) raise(ErrorCode::kInvalidArgument, "coefficient count does not match grid");
  std::vector<double> values(grid.size());
  spectral::inverse(grid, coeffs, values);
  return from_values(grid, std::move(values));
}

SurfaceField SurfaceField::constant(const PeriodicGrid& grid, double value) {
  std::vector<double> values(grid.size(), value);
  std::vector<Complex> coeffs(grid.size(), Complex{});
  coeffs[0] = value;
  return SurfaceField(grid, std::move(values), std::move(coeffs));
}

SurfaceField SurfaceField::sample(const PeriodicGrid& grid,
                                  const std::function<double(double, double)>& f) {
  std::vector<double> values(grid.size());
  const int n = grid.n();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const int i0 = static_cast<int>(i % static_cast<std::size_t>(n));
    const int i1 = grid.dim() == 1 ? 0 : static_cast<int>(i / static_cast<std::size_t>(n));
    values[i] = f(grid.coordinate(i0), grid.coordinate(i1));
  }
  return from_values(grid, std::move(values));
}

double SurfaceField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double SurfaceField::min_value() const noexcept { return *std::min_element(values_.begin(), values_.end()); }

double SurfaceField::max_value() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

SurfaceField SurfaceField::without_mean() const {
  // The sample average, not f̂(0): after cancellation the two can differ by
  // more than the field itself carries.
  const double m = std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
  std::vector<double> values(values_);
  for (auto& v : values) v -= m;
  std::vector<Complex> coeffs(coeffs_);
  coeffs[0] = 0.0;
  return SurfaceField(grid_, std::move(values), std::move(coeffs));
}

SurfaceField SurfaceField::operator-() const { return axpy(-1.0, *this, SurfaceField(grid_)); }

SurfaceField SurfaceField::axpy(double a, const SurfaceField& x, const SurfaceField& y) {
  require_same_grid(x, y);
  std::vector<double> values(y.values_);
  std::vector<Complex> coeffs(y.coeffs_);
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] += a * x.values_[i];
    coeffs[i] += a * x.coeffs_[i];
  }
  return SurfaceField(x.grid_, std::move(values), std::move(coeffs));
}

SurfaceField operator+(const SurfaceField& a, const SurfaceField& b) { return SurfaceField::axpy(1.0, a, b); }

SurfaceField operator-(const SurfaceField& a, const SurfaceField& b) { return SurfaceField::axpy(-1.0, b, a); }

SurfaceField operator*(double a, const SurfaceField& f) {
  return SurfaceField::axpy(a, f, SurfaceField(f.grid()));
}

SurfaceField multiply(const SurfaceField& a, const SurfaceField& b) {
  if (!(a.grid() == b.grid())) raise(ErrorCode::kInvalidArgument, "fields live on different grids");
  std::vector<double> values(a.grid().size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = a.value(i) * b.value(i);
  return SurfaceField::from_values(a.grid(), std::move(values));
}

SurfaceField map_values(const SurfaceField& f, const std::function<double(double)>& op) {
  std::vector<double> values(f.grid().size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = op(f.value(i));
  return SurfaceField::from_values(f.grid(), std::move(values));
}

}  // namespace waves
