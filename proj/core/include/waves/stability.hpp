#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "waves/evolution.hpp"
#include "waves/traveling_wave.hpp"

namespace waves::lab {

enum class Verdict { kDecayed, kNotDecayed, kInconclusive };

const char* to_string(Verdict v) noexcept;

struct FitWindow {
  double start_fraction = 0.1;  // samples with t < start_fraction·T are dropped
  double floor_factor = 100.0;  // samples ≤ floor_factor·floor are dropped
  double floor = 0.0;           // round-off floor of the monitored norm; 0 → derived
  double min_r2 = 0.99;
  int min_samples = 5;
};

struct DecayReport {
  std::vector<double> times;
  std::vector<double> hs_norms;
  double rate = 0.0;       // c₀ of ‖f(t)‖ ≈ C₀‖f₀‖e^{−c₀t}
  double r2 = 0.0;
  double prefactor = 0.0;  // C₀
  Verdict verdict = Verdict::kInconclusive;
  double fit_start = 0.0;
  double fit_end = 0.0;
  int fit_samples = 0;
  double floor = 0.0;
  double initial_norm = 0.0;
  std::string note;
  std::optional<evo::Trajectory> trajectory;  // set by the experiment drivers
};

/// Least-squares fit of log‖f‖ against t over the window of (times, norms),
/// with T = times.back(). Verdict is Inconclusive when fewer than
/// min_samples samples survive the window.
DecayReport fit_decay(std::vector<double> times, std::vector<double> norms, const FitWindow& window);

struct ModeAmplitude {
  int k1 = 1;
  int k2 = 0;
  double weight = 1.0;
  double phase = 0.0;
};

/// f₀ = amplitude·Σ weight·cos(k·x + phase) over `modes`, or, when `seed`
/// is set, amplitude times a seeded random smooth field scaled to unit sup norm.
struct PerturbationSpec {
  std::vector<ModeAmplitude> modes;
  std::optional<std::uint64_t> seed;
  double amplitude = 1e-3;
  double s = 3.0;
  /// amplitude must not exceed this; negative → 1e−2‖η*‖_{H^s} + 1e−3.
  double admission_threshold = -1.0;
};

SurfaceField make_perturbation(const PeriodicGrid& grid, const PerturbationSpec& spec);

/// N(f) = {G[η*]f − G[f+η*]f} + {G[η*](η*+φ) − G[f+η*](η*+φ)}.
SurfaceField nonlinear_remainder(const SurfaceField& f, const SurfaceField& eta_star, const SurfaceField& phi,
                                 const dn::FluidConfig& cfg, const dn::DnBackend& backend);

/// Evolves η* + f₀ under the full dynamics and fits the decay of ‖η − η*‖_{H^s}.
/// Throws InvalidArgument if the amplitude exceeds the admission threshold.
DecayReport decay_experiment(const tw::TravelingWaveSolution& wave, const SurfaceField& phi,
                             const dn::FluidConfig& cfg, const PerturbationSpec& pert,
                             const evo::SchemeConfig& scheme, double horizon, const FitWindow& window,
                             const dn::DnBackend& backend, int record_every = 1);

struct ScanRow {
  double amplitude = 0.0;
  Verdict verdict = Verdict::kInconclusive;
  double rate = 0.0;
  std::optional<ErrorCode> error;
  std::string message;
};

struct ScanResult {
  std::vector<ScanRow> rows;
  double margin = 0.0;  // largest amplitude with verdict Decayed, 0 if none
};

/// Runs decay_experiment per amplitude without the admission check; errors
/// are recorded as NotDecayed rows and the scan continues.
ScanResult stability_threshold_scan(const tw::TravelingWaveSolution& wave, const SurfaceField& phi,
                                    const dn::FluidConfig& cfg, const std::vector<double>& amplitudes,
                                    const PerturbationSpec& shape, const evo::SchemeConfig& scheme, double horizon,
                                    const FitWindow& window, const dn::DnBackend& backend, int record_every = 1);

/// ∂_t g = 𝓛g from g₀ on a frozen G[η*], fitted like decay_experiment.
DecayReport linear_decay_experiment(const SurfaceField& eta_star, double gamma, const dn::FluidConfig& cfg,
                                    const SurfaceField& g0, const evo::SchemeConfig& scheme, double horizon,
                                    const FitWindow& window, const dn::DnBackend& backend, double s = 3.0);

}  // namespace waves::lab
