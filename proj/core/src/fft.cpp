#include "waves/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "waves/error.hpp"

namespace waves::spectral {
namespace {

enum class PlanKind { kC2CForward, kC2CBackward, kR2C, kC2R };

using PlanKey = std::tuple<int, int, int, PlanKind>;

// FFTW planning is not thread-safe; executing a plan on new arrays is.
// Plans live for the whole process.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan get_plan(const PeriodicGrid& grid, int rows, PlanKind kind) {
  static std::map<PlanKey, fftw_plan> cache;
  const PlanKey key{grid.dim(), grid.n(), rows, kind};
  std::lock_guard lock(plan_mutex());
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  const int n = grid.n();
  // FFTW wants the slowest dimension first; our axis 0 is fastest.
  int dims[2] = {n, n};
  const int rank = grid.dim();
  const auto real_dist = static_cast<int>(grid.size());
  const auto half_dist = static_cast<int>(grid.half_size());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;

  std::vector<fftw_complex> cbuf_a(static_cast<std::size_t>(real_dist) * rows);
  std::vector<fftw_complex> cbuf_b(static_cast<std::size_t>(real_dist) * rows);
  std::vector<double> rbuf(static_cast<std::size_t>(real_dist) * rows);

  fftw_plan plan = nullptr;
  switch (kind) {
    case PlanKind::kC2CForward:
      plan = fftw_plan_many_dft(rank, dims, rows, cbuf_a.data(), nullptr, 1, real_dist,
                                cbuf_b.data(), nullptr, 1, real_dist, FFTW_FORWARD, flags);
      break;
    case PlanKind::kC2CBackward:
      plan = fftw_plan_many_dft(rank, dims, rows, cbuf_a.data(), nullptr, 1, real_dist,
                                cbuf_b.data(), nullptr, 1, real_dist, FFTW_BACKWARD, flags);
      break;
    case PlanKind::kR2C:
      plan = fftw_plan_many_dft_r2c(rank, dims, rows, rbuf.data(), nullptr, 1, real_dist,
                                    cbuf_a.data(), nullptr, 1, half_dist, flags);
      break;
    case PlanKind::kC2R:
      plan = fftw_plan_many_dft_c2r(rank, dims, rows, cbuf_a.data(), nullptr, 1, half_dist,
                                    rbuf.data(), nullptr, 1, real_dist, flags);
      break;
  }
  if (plan == nullptr) raise(ErrorCode::kInvalidArgument, "FFTW failed to create a plan");
  cache.emplace(key, plan);
  return plan;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

void forward(const PeriodicGrid& grid, std::span<const double> values, std::span<Complex> coeffs) {
  const std::size_t size = grid.size();
  if (values.size() != size || coeffs.size() != size) {
    raise(ErrorCode::kInvalidArgument, "transform size does not match grid");
  }
  thread_local std::vector<Complex> scratch;
  scratch.assign(values.begin(), values.end());
  fftw_execute_dft(get_plan(grid, 1, PlanKind::kC2CForward), as_fftw(scratch.data()),
                   as_fftw(coeffs.data()));
  const double scale = 1.0 / static_cast<double>(size);
  for (auto& c : coeffs) c *= scale;
}

void inverse(const PeriodicGrid& grid, std::span<const Complex> coeffs, std::span<double> values) {
  const std::size_t size = grid.size();
  if (values.size() != size || coeffs.size() != size) {
    raise(ErrorCode::kInvalidArgument, "transform size does not match grid");
  }
  thread_local std::vector<Complex> in;
  thread_local std::vector<Complex> out;
  in.assign(coeffs.begin(), coeffs.end());
  out.resize(size);
  fftw_execute_dft(get_plan(grid, 1, PlanKind::kC2CBackward), as_fftw(in.data()),
                   as_fftw(out.data()));
  for (std::size_t i = 0; i < size; ++i) values[i] = out[i].real();
}

BatchedRealFft::BatchedRealFft(const PeriodicGrid& grid, int rows)
    : grid_(grid),
      rows_(rows),
      forward_plan_(get_plan(grid, rows, PlanKind::kR2C)),
      inverse_plan_(get_plan(grid, rows, PlanKind::kC2R)) {}

void BatchedRealFft::forward(const double* in, Complex* out) const {
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(in),
                       as_fftw(out));
  const double scale = 1.0 / static_cast<double>(grid_.size());
  const std::size_t total = grid_.half_size() * static_cast<std::size_t>(rows_);
  for (std::size_t i = 0; i < total; ++i) out[i] *= scale;
}

void BatchedRealFft::inverse(Complex* in, double* out) const {
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_), as_fftw(in), out);
}

}  // namespace waves::spectral
