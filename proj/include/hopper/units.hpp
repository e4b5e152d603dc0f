#pragma once

#include <numbers>

namespace hopper {

// Angles cross every public interface in degrees and are converted here only.
constexpr double deg_to_rad(double degrees) { return degrees * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double radians) { return radians * 180.0 / std::numbers::pi; }

}  // namespace hopper
