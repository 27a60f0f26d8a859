#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "waves/dn_operator.hpp"
#include "waves/evolution.hpp"
#include "waves/stability.hpp"

namespace waves::harness {

enum class RunKind { kDnCheck, kTwSolve, kEvolve, kStability, kProps };

const char* to_string(RunKind kind) noexcept;
RunKind parse_kind(const std::string& name);  // InvalidArgument

/// One term amplitude·cos(k·x + phase) of φ.
struct PhiMode {
  int k1 = 1;
  int k2 = 0;
  double amplitude = 0.0;
  double phase = 0.0;
};

struct ProblemBlock {
  std::vector<PhiMode> phi;  // empty → φ = 0
  double gamma = 0.0;
  double depth = 1.0;        // b; ignored when infinite
  bool infinite = false;
  double separation_margin = -1.0;  // 𝔡; negative → 0.1·b
  int dim = 1;
  int n = 128;
};

struct SolverBlock {
  dn::DnBackend backend = dn::MappedElliptic{};
  double tw_tol = 1e-10;
  double delta = 0.0;  // 0 → 0.5·min(1, μ(φ))
  int max_iter = 200;
  double s = 3.0;
};

struct EvolutionBlock {
  evo::SchemeConfig scheme;
  double horizon = 1.0;
  int record_every = 1;
};

enum class InitialState { kFlat, kWave };

struct ExperimentBlock {
  RunKind kind = RunKind::kDnCheck;
  bool kind_given = false;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "out";
  InitialState initial = InitialState::kWave;
  lab::PerturbationSpec perturbation;
  bool random_perturbation = false;
  std::vector<double> amplitudes;  // stability scan, empty → no scan
  lab::FitWindow window;
  int samples = 10;  // random draws for dn-check and props
};

struct RunConfig {
  ProblemBlock problem;
  SolverBlock solver;
  EvolutionBlock evolution;
  ExperimentBlock experiment;

  SurfaceField phi() const;
  dn::FluidConfig fluid() const;
};

/// Every violation is reported by key path (e.g. `problem.depth`); unknown
/// keys are violations. Throws SchemaViolation listing all of them.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::filesystem::path& path);  // also MissingFile

/// Violations only, without throwing; empty when the config is valid.
std::vector<std::string> schema_violations(const std::string& text);

/// Normalized JSON with every default filled in.
std::string emit_config(const RunConfig& cfg);

/// 64-bit FNV-1a, hex.
std::string fnv1a_hex(const std::string& text);

}  // namespace waves::harness
