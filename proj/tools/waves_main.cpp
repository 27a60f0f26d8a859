// waves <kind> --config <path> [--output-dir <dir>] [--seed <u64>]
//
// Exit status: 0 all checks passed, 1 a check failed, 2 the run raised an
// error, 3 the command line or config was rejected before the run started.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "waves/run.hpp"

namespace {

constexpr int kUsageError = 3;

int dispatch(waves::harness::RunKind kind, const std::string& config_path, const std::string& output_dir,
             const std::optional<std::uint64_t>& seed) {
  using namespace waves::harness;
  try {
    RunConfig cfg = parse_config(config_path);
    RunOptions opts;
    opts.kind = kind;
    if (!output_dir.empty()) opts.output_dir = output_dir;
    opts.seed = seed;
    const RunManifest m = run(std::move(cfg), opts);
    for (const auto& c : m.checks)
      std::printf("%-24s %s  %s\n", c.name.c_str(), c.passed ? "PASS" : "FAIL", c.detail.c_str());
    if (!m.error.empty()) std::fprintf(stderr, "error [%s]: %s\n", std::string(waves::to_string(*m.error_code)).c_str(), m.error.c_str());
    std::printf("manifest: %s\n", (m.output_dir / "run.json").string().c_str());
    return m.exit_status();
  } catch (const waves::Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", std::string(waves::to_string(e.code())).c_str(), e.what());
    return e.code() == waves::ErrorCode::kIoError ? 2 : kUsageError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hele-Shaw free-surface experiments"};
  app.require_subcommand(1);
  std::string config_path, output_dir;
  std::optional<std::uint64_t> seed;
  int status = 0;

  for (const char* name : {"dn-check", "tw-solve", "evolve", "stability", "props"}) {
    CLI::App* sub = app.add_subcommand(name, std::string("run a ") + name + " experiment");
    sub->add_option("--config", config_path, "JSON run config")->required()->check(CLI::ExistingFile);
    sub->add_option("--output-dir", output_dir, "overrides experiment.output_dir");
    sub->add_option("--seed", seed, "overrides experiment.seed");
    sub->callback([&, name] { status = dispatch(waves::harness::parse_kind(name), config_path, output_dir, seed); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }
  return status;
}
