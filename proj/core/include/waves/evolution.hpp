#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "waves/dn_operator.hpp"

namespace waves::evo {

/// kImex1 and kImex2 integrate the linear part Λ = γ∂₁ − G₀ exactly
/// (exponential time differencing of order 1 and 2); kEpsViscosity is
/// kImex2 with εΔ added to Λ.
enum class Scheme { kImex1, kImex2, kEpsViscosity };

struct SchemeConfig {
  double dt = 1e-2;
  Scheme scheme = Scheme::kImex2;
  double epsilon = 0.0;  // used by kEpsViscosity only, must lie in (0, 1)
  DealiasRule dealias = DealiasRule::kNone;  // applied to the explicit remainder
};

/// Throws InvalidArgument for dt ≤ 0 or ε ∉ (0, 1) under kEpsViscosity.
void validate(const SchemeConfig& scheme);

int scheme_order(Scheme scheme) noexcept;

struct EvolutionProblem {
  SurfaceField phi;
  double gamma = 0.0;
  dn::FluidConfig cfg;
};

struct EvolutionState {
  SurfaceField eta;
  double t = 0.0;
};

/// One step of ∂_t η = γ∂₁η − G[η](η + φ). A step whose H^s norm grows by
/// more than 50% is retried as two half steps, down to dt/2¹⁰.
///
/// Errors: SeparationViolated; StepRejected.
EvolutionState step(const EvolutionState& state, const EvolutionProblem& prob, const SchemeConfig& scheme,
                    const dn::DnBackend& backend);

struct TrajectoryRecord {
  double t = 0.0;
  double l2 = 0.0;         // of η − η* (η when no reference)
  double hs = 0.0;
  double hhalf_dot = 0.0;
  double mean = 0.0;       // of η
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
  std::vector<EvolutionState> states;  // filled when keep_states is set
  EvolutionState final_state;
  /// Riemann sum of ‖η − η*‖²_{H^{s+1/2}} dt over the accepted steps.
  double dissipation_integral = 0.0;
  int steps = 0;
};

struct SimulateOptions {
  double horizon = 0.0;
  int record_every = 1;
  std::optional<SurfaceField> reference;
  double s = 3.0;
  bool keep_states = false;
};

/// Steps to t₀ + horizon; the last step is shortened to land exactly.
Trajectory simulate(const SurfaceField& eta0, const EvolutionProblem& prob, const SchemeConfig& scheme,
                    const dn::DnBackend& backend, const SimulateOptions& options);

/// ∂_t g = γ∂₁g − G[η*]g + F with G[η*] fixed; the operator is frozen into a
/// dense matrix unless `freeze_operator` is false.
class LinearizedFlow {
 public:
  LinearizedFlow(const SurfaceField& eta_star, double gamma, dn::FluidConfig cfg, SchemeConfig scheme,
                 const dn::DnBackend& backend, bool freeze_operator = true);

  /// One step of size scheme.dt. F must be mean-zero when given.
  SurfaceField step(const SurfaceField& g, const SurfaceField* forcing = nullptr) const;

  /// 𝓛g = γ∂₁g − G[η*]g.
  SurfaceField apply_linear(const SurfaceField& g) const;

  const dn::DnOperator& op() const noexcept { return *op_; }
  const SchemeConfig& scheme() const noexcept { return scheme_; }

 private:
  double gamma_;
  dn::FluidConfig cfg_;
  SchemeConfig scheme_;
  std::unique_ptr<dn::DnOperator> op_;
  std::vector<Complex> e_, phi1_, phi2_;
};

SurfaceField linearized_step(const SurfaceField& g, const SurfaceField& eta_star, double gamma,
                             const dn::FluidConfig& cfg, const SchemeConfig& scheme,
                             const SurfaceField* forcing, const dn::DnBackend& backend);

/// ½A‖g‖² + ½Σ_{|α|=s}‖∂^α g‖², evaluated on the Fourier symbol Σ_{|α|=s} k^{2α}.
double energy(const SurfaceField& g, int s, double A);

struct EnergyConstants {
  double lower = 0.0;  // c₁ = ½min(A, κ), κ = 1/(2^s m_s)
  double upper = 0.0;  // c₂ = ½max(A, 1)
};

/// c₁‖g‖²_{H^s} ≤ E ≤ c₂‖g‖²_{H^s}; m_s is the largest multinomial
/// coefficient s!/α! over |α| = s in dimension d.
EnergyConstants energy_equivalence(int s, double A, int dim);

}  // namespace waves::evo
