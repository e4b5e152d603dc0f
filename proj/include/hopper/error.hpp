#pragma once

#include <stdexcept>
#include <string>

namespace hopper {

enum class ErrorCode {
  kInvalidParameter,
  kNumeric,
  kUncontrollable,
  kDegenerateDesign,
  kNonConvergence,
  kInvalidGeometry,
  kNonBallistic,
  kNoSolution,
  kOverBraked,
  kEscapeViolation,
  kDegenerateSlope,
  kEmptyInput,
  kUndefined,
  kIo,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when a hop would launch at or above the guarded escape speed.
class EscapeViolation : public Error {
 public:
  EscapeViolation(const std::string& what, double max_safe_distance)
      : Error(ErrorCode::kEscapeViolation, what), max_safe_distance_(max_safe_distance) {}

  /// Largest distance [m] the same configuration can plan safely.
  double max_safe_distance() const noexcept { return max_safe_distance_; }

 private:
  double max_safe_distance_;
};

}  // namespace hopper
