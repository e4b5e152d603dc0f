#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hopper/hopdyn.hpp"

namespace hopper::planner {

using hopdyn::Environment;
using hopdyn::HopperConfig;

struct PlanOptions {
  double target_angle_deg = 45.0;  // launch angle that maximizes range
  double spin_fraction = 1.0;      // spin-up torque as a fraction of min_torque
  double safety_factor = 0.9;      // launch speed must stay below this * escape velocity
  double min_brake_time = 0.0;     // [s] shortest brake the actuator can realize
  double distance_cap = 1.0e6;     // [m] reported when the escape limit is unbounded

  void validate() const;
};

/// A solved hop maneuver. Units SI, angles in degrees.
struct JumpPlan {
  double target_distance = 0.0;
  double slope_beta = 0.0;
  double omega_f = 0.0;
  double delta_t = 0.0;
  std::optional<double> brake_torque;  // empty for an instantaneous stop
  double launch_angle = 0.0;
  double launch_speed = 0.0;
  double speedup_time_Tmin = 0.0;
  double fly_time_Tf = 0.0;
  double predicted_distance = 0.0;
  std::vector<std::string> warnings;

  bool instant_brake() const { return !brake_torque.has_value(); }
};

/// Solves (omega_f, delta_t) for a hop of `distance` on the environment slope.
///
/// When the geometric angle alpha + beta exceeds the target angle, the brake
/// is stretched so the platform rotates down to the target angle before
/// liftoff. Otherwise the flywheel is stopped as fast as possible and the hop
/// leaves at alpha + beta. If the required braking time is shorter than
/// `min_brake_time`, the brake time is fixed at that floor and the flywheel
/// speed is found numerically on the rising branch of the range curve.
///
/// Throws EscapeViolation, Error(kDegenerateSlope) when beta <= -alpha,
/// Error(kNoSolution) when the floor makes the distance unreachable.
JumpPlan plan_jump(double distance, const HopperConfig& cfg, const Environment& env,
                   const PlanOptions& opts = {});

/// Largest distance whose plan keeps the launch speed below the guarded
/// escape speed; `opts.distance_cap` when the escape speed is unbounded.
double max_safe_distance(const HopperConfig& cfg, const Environment& env,
                         const PlanOptions& opts = {});

// ---------------------------------------------------------------------------
// Multi-hop missions

struct MissionOptions {
  double max_hop = 100.0;                   // [m]
  bool replan_after_each_landing = true;
  int max_hops = 20;
  double expected_accuracy_fraction = 0.1;  // per-hop landing ring
  PlanOptions plan;
};

struct MissionPlan {
  double total_distance = 0.0;
  double tolerance = 0.0;
  std::vector<JumpPlan> hops;
  bool replan_after_each_landing = true;
  std::vector<std::string> warnings;
};

/// Greedy split of `total` into hops of max_hop plus the remainder.
MissionPlan plan_mission(double total, double tolerance, const HopperConfig& cfg,
                         const Environment& env, const MissionOptions& opts = {});

struct HopRecord {
  int index = 0;
  int direction = 1;  // +1 forward, -1 back toward the start
  JumpPlan plan;
  double realized = 0.0;        // distance covered along `direction` [m]
  double position_after = 0.0;  // along the mission line [m]
};

struct MissionResult {
  MissionPlan plan;
  std::vector<HopRecord> hops;
  double final_position = 0.0;
  double final_error = 0.0;  // |total - final_position| [m]
  double error_pct = 0.0;
  bool within_tolerance = false;
};

/// Flies one planned hop and returns the distance actually covered. The
/// executor may replace `plan` with the maneuver it actually flew.
using HopExecutor = std::function<double(JumpPlan& plan, int hop_index)>;

/// Flies the mission. With replanning, every hop targets
/// min(max_hop, |remaining|) from the measured landing point and hops continue
/// until the residual is inside the tolerance (or max_hops is reached).
/// Without replanning, the initial hop list is flown as is. Hops back toward
/// the start see the slope mirrored.
MissionResult execute_mission(const MissionPlan& plan, const HopperConfig& cfg,
                              const Environment& env, const MissionOptions& opts,
                              const HopExecutor& execute);

// ---------------------------------------------------------------------------
// Brake torque sweeps

struct SweepRange {
  double tau_lo = 1e-2;  // [N m]
  double tau_hi = 1e1;   // [N m]
  int samples = 301;     // log-spaced, endpoints included
};

struct SweepRow {
  double tau = 0.0;
  double theta_deg = 0.0;
  double distance = 0.0;
  bool valid = true;  // false when the brake would consume the launch angle
};

struct SweepTable {
  double omega_f = 0.0;
  double slope_beta = 0.0;
  std::vector<SweepRow> rows;
  std::size_t argmax = 0;

  const SweepRow& best() const { return rows.at(argmax); }
};

SweepTable sweep_brake_torque(const HopperConfig& cfg, const Environment& env, double omega_f,
                              const SweepRange& range = {});

// ---------------------------------------------------------------------------
// Plan grids over slope and distance

inline constexpr std::array<double, 6> kTableDistances = {5.0, 10.0, 30.0, 50.0, 70.0, 100.0};

/// Slopes from +30 to -30 degrees in 5 degree steps.
std::vector<double> standard_slopes();

struct PlanTableRow {
  double slope_beta = 0.0;
  double distance = 0.0;
  std::optional<JumpPlan> plan;  // empty when the planner rejected the hop
  std::string status = "ok";     // "ok" or the error code name
};

/// One plan per (slope, distance); planner errors are recorded, not thrown.
std::vector<PlanTableRow> plan_table(const HopperConfig& cfg, const Environment& env,
                                     const std::vector<double>& slopes,
                                     const std::vector<double>& distances,
                                     const PlanOptions& opts = {});

}  // namespace hopper::planner
