#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace waves {

enum class ErrorCode {
  kInvalidArgument,
  kOrderTooHigh,
  kSeparationViolated,
  kSolverStalled,
  kSeriesDiverging,
  kMeanNotZero,
  kNoConvergence,
  kZeroInput,
  kBallExit,
  kNoContraction,
  kMaxIterations,
  kStepRejected,
  kMissingFile,
  kSchemaViolation,
  kIoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and the run manifest) can classify it without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& what);

}  // namespace waves
