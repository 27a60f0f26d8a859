#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "waves/config.hpp"
#include "waves/error.hpp"

namespace waves::harness {

struct RunOptions {
  std::optional<RunKind> kind;  // must match experiment.kind when both are set
  std::optional<std::filesystem::path> output_dir;
  std::optional<std::uint64_t> seed;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct OutputFile {
  std::string path;  // relative to the output directory
  std::string role;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::string kind;
  std::string config_hash;
  std::string version;
  std::string started;
  std::string finished;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;
  std::vector<OutputFile> outputs;
  std::vector<CheckResult> checks;
  std::string reports_json = "{}";  // per-operation reports
  std::optional<ErrorCode> error_code;
  std::string error;

  /// 0 when every check passed and nothing was raised, 1 for failed checks,
  /// 2 for an error.
  int exit_status() const noexcept;
};

/// Dispatches on the run kind, writes outputs and `run.json` (atomically,
/// last) into the output directory. Library errors are recorded in the
/// manifest rather than thrown; IoError on the manifest itself propagates.
RunManifest run(RunConfig config, const RunOptions& options = {});

std::string manifest_to_json(const RunManifest& manifest);

}  // namespace waves::harness
