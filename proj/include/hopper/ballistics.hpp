#pragma once

#include <vector>

#include "hopper/control.hpp"
#include "hopper/hopdyn.hpp"

namespace hopper::ballistics {

using hopdyn::Environment;
using hopdyn::HopperConfig;
using hopdyn::LaunchState;

struct TrajectorySample {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  LaunchState launch;
  double landing_distance = 0.0;
  double fly_time = 0.0;
  double apex_time = 0.0;
  double apex_height = 0.0;
};

struct FlightOptions {
  int min_steps = 2000;  // RK4 steps per flight
};

/// Integrates x'' = 0, y'' = -g from the origin with RK4 until y crosses
/// zero again; the landing point is located by linear interpolation of the
/// last step, the apex likewise on vy.
Trajectory simulate_flight(const LaunchState& launch, const Environment& env,
                           const FlightOptions& options = {});

struct JumpOutcome {
  double target = 0.0;
  double realized = 0.0;
  bool within_tolerance = false;
  double relative_error_pct = 0.0;
  bool over_braked = false;
  double omega_f = 0.0;
  double delta_t = 0.0;
  LaunchState launch;
};

/// Turns a realized braking run into a hop: the mean braking torque over the
/// achieved braking time sets the launch angle, the initial flywheel speed
/// sets the launch speed, and the flight is integrated. A landing inside
/// tolerance_fraction * target counts as on target. A brake that would
/// consume the whole launch angle yields an over-braked outcome with zero
/// distance.
JumpOutcome replay_brake(const control::BrakeResponse& response, const HopperConfig& cfg,
                         const Environment& env, double target,
                         double tolerance_fraction = 0.1);

/// Same as replay_brake for a bare (omega_f, delta_t) pair.
JumpOutcome replay_maneuver(double omega_f, double delta_t, const HopperConfig& cfg,
                            const Environment& env, double target,
                            double tolerance_fraction = 0.1);

struct LandingStats {
  double target = 0.0;
  std::size_t count = 0;
  double mean_distance = 0.0;
  double std_deviation = 0.0;  // population
  double relative_error_pct = 0.0;
};

/// Mean, population standard deviation and relative error of the mean.
/// All outcomes must share one target. Throws Error(kEmptyInput) on an empty list.
LandingStats aggregate(const std::vector<JumpOutcome>& outcomes);

}  // namespace hopper::ballistics
