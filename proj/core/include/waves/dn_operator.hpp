#pragma once

#include <memory>
#include <string>
#include <utility>
#include <variant>

#include "waves/field.hpp"
#include "waves/spectral.hpp"

namespace waves::dn {

struct FiniteDepth {
  double b = 1.0;
};

/// Infinite depth. The fluid below y = −D, D = ‖η‖_∞ + layer_depth, is a
/// flat half-space whose exact Dirichlet-to-Neumann map ∂_yψ = |D_x|ψ closes
/// the computational strip; no truncation error is introduced.
struct InfiniteDepth {
  double layer_depth = 1.0;
};

struct FluidConfig {
  std::variant<FiniteDepth, InfiniteDepth> depth = FiniteDepth{};
  double separation_margin = 0.1;  // 𝔡: finite depth requires inf(η + b) ≥ 𝔡
  int dim = 1;

  static FluidConfig finite(double b, int dim = 1);  // 𝔡 defaults to 0.1·b
  static FluidConfig infinite(double layer_depth = 1.0, int dim = 1);

  bool is_finite() const noexcept { return std::holds_alternative<FiniteDepth>(depth); }
  /// b for finite depth; the strip layer depth for infinite depth.
  double nominal_depth() const noexcept;
};

/// Fourier multiplier |k|·tanh(b|k|) (finite) or |k| (infinite).
struct FlatSymbol {};

/// Order-M power series in η about the flat interface.
struct CraigSulem {
  int order = 4;
  DealiasRule dealias = DealiasRule::kTwoThirds;
};

/// Laplace problem mapped onto a flat strip: Fourier collocation in x,
/// Chebyshev–Lobatto in the vertical, solved by preconditioned GMRES.
struct MappedElliptic {
  int vertical_points = 64;
  double solver_tol = 1e-12;
  int max_iterations = 800;
};

using DnBackend = std::variant<FlatSymbol, CraigSulem, MappedElliptic>;

/// Throws InvalidArgument if the backend parameters are out of range
/// (M ∈ [0, 8], vertical points ≥ 16, tolerance ∈ [1e−14, 1e−6]).
void validate(const DnBackend& backend);

std::string describe(const DnBackend& backend);

struct EllipticSolveReport {
  int iterations = 0;
  double residual = 0.0;
  DnBackend backend_used = MappedElliptic{};
  double depth_used = 0.0;
  /// Mean of ∇ψ·N before the final projection; zero for the exact operator.
  double flux_defect = 0.0;
};

double flat_symbol(const FluidConfig& cfg, const Wavevector& k);

/// Throws SeparationViolated if inf(η + b) < 𝔡 (finite depth only).
void check_admissible(const SurfaceField& eta, const FluidConfig& cfg);

/// Depth D of the computational floor below y = 0: b, or ‖η‖_∞ + layer_depth.
double effective_depth(const SurfaceField& eta, const FluidConfig& cfg);

SurfaceField dn_flat(const SurfaceField& g, const FluidConfig& cfg);

SurfaceField dn_craig_sulem(const SurfaceField& eta, const SurfaceField& g, const FluidConfig& cfg,
                            const CraigSulem& params);

std::pair<SurfaceField, EllipticSolveReport> dn_elliptic(const SurfaceField& eta, const SurfaceField& g,
                                                         const FluidConfig& cfg,
                                                         const MappedElliptic& params);

/// G[η]g by the selected backend, projected onto mean-zero fields.
SurfaceField dn_apply(const SurfaceField& eta, const SurfaceField& g, const FluidConfig& cfg,
                      const DnBackend& backend);

/// G[η] for a fixed surface. Building one amortizes per-surface setup
/// (preconditioner factorizations, powers of η) across many inputs.
class DnOperator {
 public:
  virtual ~DnOperator() = default;

  /// Mean-zero G[η]g.
  virtual SurfaceField apply(const SurfaceField& g) const = 0;

  const SurfaceField& surface() const noexcept { return eta_; }
  const FluidConfig& config() const noexcept { return cfg_; }

 protected:
  DnOperator(SurfaceField eta, FluidConfig cfg) : eta_(std::move(eta)), cfg_(std::move(cfg)) {}

 private:
  SurfaceField eta_;
  FluidConfig cfg_;
};

std::unique_ptr<DnOperator> make_dn_operator(const SurfaceField& eta, const FluidConfig& cfg,
                                             const DnBackend& backend);

/// Dense representation of `op` assembled column by column on the real
/// Fourier basis. Applying it is a matrix-vector product, which pays off
/// when the same surface is hit many times (linearized flows, T_γ's base
/// operator).
std::unique_ptr<DnOperator> freeze(const DnOperator& op);

struct InverseReport {
  int iterations = 0;
  double residual = 0.0;
};

/// Solves G[η]g = h for mean-zero g, GMRES preconditioned by the flat
/// inverse multiplier. Throws MeanNotZero if h has a mean, NoConvergence if
/// the relative residual stays above `tol`.
SurfaceField dn_inverse(const DnOperator& op, const SurfaceField& h, double tol = 1e-12,
                        const SurfaceField* initial_guess = nullptr, InverseReport* report = nullptr,
                        int max_iterations = 300);

SurfaceField dn_inverse(const SurfaceField& eta, const SurfaceField& h, const FluidConfig& cfg,
                        const DnBackend& backend, double tol = 1e-12);

}  // namespace waves::dn
