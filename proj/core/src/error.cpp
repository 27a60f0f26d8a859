#include "waves/error.hpp"

namespace waves {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kOrderTooHigh: return "OrderTooHigh";
    case ErrorCode::kSeparationViolated: return "SeparationViolated";
    case ErrorCode::kSolverStalled: return "SolverStalled";
    case ErrorCode::kSeriesDiverging: return "SeriesDiverging";
    case ErrorCode::kMeanNotZero: return "MeanNotZero";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kZeroInput: return "ZeroInput";
    case ErrorCode::kBallExit: return "BallExit";
    case ErrorCode::kNoContraction: return "NoContraction";
    case ErrorCode::kMaxIterations: return "MaxIterations";
    case ErrorCode::kStepRejected: return "StepRejected";
    case ErrorCode::kMissingFile: return "MissingFile";
    case ErrorCode::kSchemaViolation: return "SchemaViolation";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void raise(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace waves
