#include "hopper/error.hpp"

namespace hopper {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParameter: return "invalid-parameter";
    case ErrorCode::kNumeric: return "numeric";
    case ErrorCode::kUncontrollable: return "uncontrollable-system";
    case ErrorCode::kDegenerateDesign: return "degenerate-design";
    case ErrorCode::kNonConvergence: return "non-convergence";
    case ErrorCode::kInvalidGeometry: return "invalid-geometry";
    case ErrorCode::kNonBallistic: return "non-ballistic";
    case ErrorCode::kNoSolution: return "no-solution";
    case ErrorCode::kOverBraked: return "over-braked";
    case ErrorCode::kEscapeViolation: return "escape-violation";
    case ErrorCode::kDegenerateSlope: return "degenerate-slope";
    case ErrorCode::kEmptyInput: return "empty-input";
    case ErrorCode::kUndefined: return "undefined";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace hopper
