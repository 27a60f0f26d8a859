#pragma once

#include <utility>

#include "waves/dn_operator.hpp"
#include "waves/spectral.hpp"

namespace waves::dn {

/// ‖G[η₁]g − G[η₂]g‖_{H^{s−1}}.
double dn_contraction_gap(const SurfaceField& eta1, const SurfaceField& eta2, const SurfaceField& g,
                          const FluidConfig& cfg, const DnBackend& backend, double s = 3.0);

/// (G[η]g, g)_{L²} / ‖g‖²_{Ḣ^{1/2}} for mean-zero g ≠ 0. Throws ZeroInput
/// for g = 0 and MeanNotZero for data with a mean.
double coercivity_ratio(const SurfaceField& eta, const SurfaceField& g, const FluidConfig& cfg,
                        const DnBackend& backend, HalfNormWeight weight = HalfNormWeight::kModulus);
double coercivity_ratio(const DnOperator& op, const SurfaceField& g,
                        HalfNormWeight weight = HalfNormWeight::kModulus);

/// Infimum of the coercivity ratio over the span of cos(k·x), sin(k·x) with
/// 0 < max_j |k_j| ≤ max_mode (0 → every non-Nyquist mode): the smallest
/// generalized eigenvalue of the symmetrized Galerkin matrix of G[η]
/// against the diagonal Ḣ^{1/2} Gram matrix.
double coercivity_infimum(const DnOperator& op, int max_mode = 0,
                          HalfNormWeight weight = HalfNormWeight::kModulus);

/// Shape of the lower bound M in (G[η]g, g) ≥ M‖g‖²_{Ḣ^{1/2}} with the
/// unspecified dimensional constant set to 1:
///   finite depth   𝔡 / (1 + ‖∇η‖²_∞ + ‖η + b‖²_{W^{1,∞}}),
///   infinite depth 1 / (1 + ‖∇η‖_∞).
double coercivity_bound_shape(const SurfaceField& eta, const FluidConfig& cfg);

struct CommutatorResult {
  SurfaceField commutator;  // ∂^α(G f) − G(∂^α f)
  double ratio = 0.0;       // ‖[∂^α, G]f‖_{H^σ} / ‖f‖_{H^{σ+|α|}}
};

/// [∂^α, G[η]]f. Requires σ ≥ 1/2.
CommutatorResult commutator_residual(const SurfaceField& eta, const SurfaceField& f, MultiIndex alpha,
                                     double sigma, const FluidConfig& cfg, const DnBackend& backend);
CommutatorResult commutator_residual(const DnOperator& op, const SurfaceField& f, MultiIndex alpha,
                                     double sigma);

}  // namespace waves::dn
