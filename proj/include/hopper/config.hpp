#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>

#include "hopper/campaign.hpp"
#include "hopper/control.hpp"
#include "hopper/hopdyn.hpp"
#include "hopper/motor.hpp"
#include "hopper/planner.hpp"

namespace hopper::config {

/// Everything a command needs for a reproducible run.
struct RunConfig {
  motor::MotorParams motor;
  hopdyn::HopperConfig hopper;
  hopdyn::Environment env;
  control::DesignSpec design;
  double sample_time = 0.0005;
  control::BrakeOptions brake;
  planner::PlanOptions plan;
  planner::MissionOptions mission;
  control::PerturbationModel perturbation;
  double tolerance_fraction = 0.1;
  bool account_for_brake_floor = true;
  std::string output_dir = ".";
  std::uint64_t seed = 1;

  void validate() const;

  campaign::RigConfig rig() const;
  campaign::JumpSettings jump_settings() const;
};

/// The 1.5 kg cube rover on asteroid Itokawa with its bench motor.
RunConfig itokawa_defaults();

/// Reads an INI-style file (sections [motor], [hopper], [environment],
/// [controller], [planner], [perturbation], [run]) on top of the defaults.
/// Unknown sections or keys are rejected with Error(kInvalidParameter);
/// unreadable files raise Error(kIo).
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(std::istream& in);

/// Serializes every key, suitable for load_config.
std::string to_ini(const RunConfig& config);

/// Name of the environment variable holding the default config path.
inline constexpr const char* kConfigEnvVar = "HOPPER_CONFIG";

}  // namespace hopper::config
