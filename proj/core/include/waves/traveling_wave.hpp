#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "waves/dn_operator.hpp"
#include "waves/error.hpp"

namespace waves::tw {

/// Traveling-wave problem for −γ∂₁η = −G[η](η + φ), posed for ζ = η + φ.
struct TravelingWaveProblem {
  SurfaceField phi;  // mean-zero pressure profile
  double gamma = 0.0;
  dn::FluidConfig cfg;
  double delta = 0.0;  // radius of the ball for ζ (sup norm); 0 → default
  double tol = 1e-10;  // on ‖ζ_{n+1} − ζ_n‖_{H^s}
  int max_iter = 200;
  double s = 3.0;

  /// Fills δ = 0.5·min(1, μ(φ)) when delta is 0.
  static TravelingWaveProblem make(SurfaceField phi, double gamma, dn::FluidConfig cfg);
};

/// μ(φ) = inf(−φ + b) in finite depth, +∞ in infinite depth.
double separation_mu(const SurfaceField& phi, const dn::FluidConfig& cfg);

/// Throws InvalidArgument when φ has a mean, μ(φ) ≤ 0, or δ is out of range.
void validate(const TravelingWaveProblem& prob);

struct TravelingWaveSolution {
  SurfaceField eta;
  double gamma = 0.0;
  double residual_norm = 0.0;      // independent residual, H^{s−1}
  std::vector<double> iter_trace;  // ‖ζ_{n+1} − ζ_n‖_{H^s}
  double contraction_factor = 0.0;
  dn::DnBackend backend;
  double zeta_w1_inf = 0.0;  // W^{1,∞} proxy of ζ = η + φ
  int iterations() const noexcept { return static_cast<int>(iter_trace.size()); }
};

/// T_γ(ζ) = (G[−φ])⁻¹{γ∂₁ζ − γ∂₁φ − (G[ζ−φ]ζ − G[−φ]ζ)}.
///
/// The base operator G[−φ] depends only on φ, so one map serves every γ;
/// by default it is frozen into a dense matrix once.
class FixedPointMap {
 public:
  FixedPointMap(SurfaceField phi, dn::FluidConfig cfg, dn::DnBackend backend, bool freeze_base = true);

  /// Throws BallExit if ζ is not admissible (finite depth: ‖ζ‖_∞ ≥ μ(φ)).
  SurfaceField operator()(const SurfaceField& zeta, double gamma) const;

  const SurfaceField& phi() const noexcept { return phi_; }
  const dn::FluidConfig& config() const noexcept { return cfg_; }
  const dn::DnBackend& backend() const noexcept { return backend_; }
  const dn::DnOperator& base_operator() const noexcept { return *base_; }

 private:
  SurfaceField phi_;
  dn::FluidConfig cfg_;
  dn::DnBackend backend_;
  double mu_;
  std::unique_ptr<dn::DnOperator> base_;
  mutable std::optional<SurfaceField> last_inverse_;  // warm start for the Krylov solve
};

SurfaceField apply_T(const SurfaceField& zeta, const TravelingWaveProblem& prob, const dn::DnBackend& backend);

/// Picard iteration ζ_{n+1} = T_γ(ζ_n) from ζ₀ (0 if null).
///
/// Errors: BallExit if ζ₀ is inadmissible; NoContraction if successive
/// differences grow for 3 iterations in a row or an iterate leaves the
/// δ-ball (T_γ is then not a self-map of the ball); MaxIterations;
/// NoConvergence if the iterates settle but the independent residual
/// (mapped-elliptic) stays above tol.
TravelingWaveSolution solve_traveling_wave(const TravelingWaveProblem& prob, const dn::DnBackend& backend,
                                           const SurfaceField* zeta0 = nullptr);
TravelingWaveSolution solve_traveling_wave(const FixedPointMap& map, const TravelingWaveProblem& prob,
                                           const SurfaceField* zeta0 = nullptr);

/// ‖−γ∂₁η + G[η](η + φ)‖_{H^{s−1}}.
double residual(const SurfaceField& eta, double gamma, const SurfaceField& phi, const dn::FluidConfig& cfg,
                const dn::DnBackend& backend, double s = 3.0);

struct ContinuationEntry {
  double gamma = 0.0;
  std::optional<TravelingWaveSolution> solution;
  std::optional<ErrorCode> error;
  std::string message;
};

struct ContinuationResult {
  std::vector<ContinuationEntry> entries;
  /// ‖η_{i+1} − η_i‖_{H^s} / |γ_{i+1} − γ_i| over consecutive solved pairs.
  std::vector<double> quotients;
  double lipschitz_estimate = 0.0;  // max of quotients, 0 if none
};

/// Warm-started sweep over a sorted γ list (ascending or descending).
/// Failures are recorded per entry; later entries restart cold.
ContinuationResult continuation_in_gamma(const SurfaceField& phi, const dn::FluidConfig& cfg,
                                         const std::vector<double>& gammas, double delta, double tol,
                                         const dn::DnBackend& backend, double s = 3.0);

/// Least-squares estimate of the geometric ratio of a difference trace,
/// ignoring entries at or below `floor`.
double fit_contraction_factor(const std::vector<double>& trace, double floor);

}  // namespace waves::tw
