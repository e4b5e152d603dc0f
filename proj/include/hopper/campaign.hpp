#pragma once

// Plan -> brake -> fly pipelines that tie the controller simulation to the
// hop dynamics: single hops, repeated hops for landing statistics, and
// multi-hop missions.

#include <cstdint>
#include <vector>

#include "hopper/ballistics.hpp"
#include "hopper/control.hpp"
#include "hopper/motor.hpp"
#include "hopper/planner.hpp"

namespace hopper::campaign {

struct RigConfig {
  motor::MotorParams motor;
  control::DesignSpec design;
  double sample_time = 0.0005;  // [s]
  control::BrakeOptions brake;
};

/// Discretized flywheel motor with its braking controller.
class BrakingRig {
 public:
  explicit BrakingRig(const RigConfig& config);

  const RigConfig& config() const { return config_; }
  const motor::LinearStateModel& continuous_model() const { return continuous_; }
  const motor::LinearStateModel& discrete_model() const { return discrete_; }
  const control::ControllerDesign& design() const { return design_; }

  control::BrakeResponse brake(double initial_omega, double target_delta_t) const;

  /// Shortest braking time the controller realizes from `omega` (response to
  /// an immediate stop command).
  double brake_floor(double omega) const;

 private:
  RigConfig config_;
  motor::LinearStateModel continuous_;
  motor::LinearStateModel discrete_;
  control::ControllerDesign design_;
};

struct JumpSettings {
  planner::PlanOptions plan;
  control::PerturbationModel perturbation;
  double tolerance_fraction = 0.1;
  /// Plan around the controller's shortest achievable brake instead of an
  /// instantaneous stop.
  bool account_for_brake_floor = true;
};

/// Plans a hop the rig can fly. With `account_for_brake_floor`, the brake
/// floor at the planned speed is fed back into the planner until the speed
/// settles. When the floor pushes the required speed past the escape guard,
/// the plan falls back to the longest safe hop (shorter than `distance`,
/// flagged by a warning).
planner::JumpPlan plan_flyable_jump(double distance, const hopdyn::HopperConfig& cfg,
                                    const hopdyn::Environment& env, const BrakingRig& rig,
                                    const JumpSettings& settings);

struct FlownJump {
  control::BrakeResponse response;
  ballistics::JumpOutcome outcome;
};

/// Brakes from the (perturbed) planned speed and replays the realized brake.
FlownJump fly_jump(const planner::JumpPlan& plan, const hopdyn::HopperConfig& cfg,
                   const hopdyn::Environment& env, const BrakingRig& rig,
                   const JumpSettings& settings, std::mt19937_64& rng);

struct JumpCampaign {
  planner::JumpPlan plan;
  std::vector<ballistics::JumpOutcome> outcomes;
  ballistics::LandingStats stats;
};

/// `repetitions` perturbed brake-and-fly runs of one plan. Deterministic for a
/// given seed.
JumpCampaign run_jump_campaign(double distance, const hopdyn::HopperConfig& cfg,
                               const hopdyn::Environment& env, const BrakingRig& rig,
                               const JumpSettings& settings, int repetitions,
                               std::uint64_t seed);

/// Mission flown with perturbed brakes; each hop is planned for the rig.
planner::MissionResult run_mission(double total, double tolerance,
                                   const hopdyn::HopperConfig& cfg,
                                   const hopdyn::Environment& env, const BrakingRig& rig,
                                   const JumpSettings& settings,
                                   const planner::MissionOptions& mission_options,
                                   std::uint64_t seed);

}  // namespace hopper::campaign
