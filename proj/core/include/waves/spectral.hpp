#pragma once

#include <functional>

#include "waves/field.hpp"

namespace waves {

/// Derivative multi-index α = (α₁, α₂); α₂ must be 0 on a 1-D grid.
struct MultiIndex {
  int a1 = 0;
  int a2 = 0;
  int order() const noexcept { return a1 + a2; }
};

inline constexpr int kMaxDerivativeOrder = 6;

/// Sobolev exponent s ∈ [−2, 12]. Inhomogeneous weight (1+|k|²)^{s/2};
/// homogeneous weight |k|^s with the zero mode dropped.
struct SobolevIndex {
  double s = 0.0;
  bool homogeneous = false;
};

/// Weight for ‖·‖_{Ḣ^{1/2}}. kModulus is Σ_{k≠0}|k||ĝ(k)|²; kModulusSquared
/// reproduces the |k|² weight some texts print next to the Ḣ^{1/2} symbol.
enum class HalfNormWeight { kModulus, kModulusSquared };

enum class DealiasRule { kNone, kTwoThirds };

namespace spectral {

/// Applies a Fourier multiplier m(k). m must satisfy m(−k) = conj(m(k)) for
/// the result to be real; the Hermitian part is kept otherwise.
SurfaceField apply_multiplier(const SurfaceField& f, const std::function<Complex(const Wavevector&)>& m);

/// ∂^α f via the multiplier (ik)^α. Odd-order factors vanish on the Nyquist
/// mode. Throws OrderTooHigh for |α| > 6.
SurfaceField derivative(const SurfaceField& f, MultiIndex alpha);

/// Gradient components ∂₁f (and ∂₂f when d = 2).
std::vector<SurfaceField> gradient(const SurfaceField& f);

SurfaceField laplacian(const SurfaceField& f);

double sobolev_norm(const SurfaceField& f, SobolevIndex idx);

double l2_norm(const SurfaceField& f);

double dot_h_half_norm(const SurfaceField& f, HalfNormWeight weight = HalfNormWeight::kModulus);

/// (f, g)_{L²} under the normalized measure: mean of f·g.
double inner_product(const SurfaceField& f, const SurfaceField& g);

/// Zeroes every coefficient with some |k_j| > (2/3)(n/2).
SurfaceField dealias(const SurfaceField& f, DealiasRule rule);

/// P₀ f = f − mean(f); the zero coefficient becomes exactly 0.
SurfaceField project_mean_zero(const SurfaceField& f);

/// Grid proxy for W^{k,∞}: Σ_{j ≤ k} max_{|α| = j} max_x |∂^α f|.
double w_infinity_norm(const SurfaceField& f, int order);

/// Rigid translation f(x − shift·e₁), exact on resolved modes.
SurfaceField translate(const SurfaceField& f, double shift);

}  // namespace spectral
}  // namespace waves
