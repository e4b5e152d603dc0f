#include "hopper/ballistics.hpp"

#include <cmath>

#include <Eigen/Core>
#include <fmt/format.h>

#include "hopper/error.hpp"
#include "hopper/rk4.hpp"
#include "hopper/units.hpp"

namespace hopper::ballistics {

Trajectory simulate_flight(const LaunchState& launch, const Environment& env,
                           const FlightOptions& options) {
  env.validate();
  if (!(launch.speed_vh >= 0.0) || !std::isfinite(launch.speed_vh)) {
    throw Error(ErrorCode::kInvalidParameter, "launch speed must be finite and >= 0");
  }
  if (options.min_steps < 2) {
    throw Error(ErrorCode::kInvalidParameter, "flight needs at least 2 steps");
  }

  Trajectory traj;
  traj.launch = launch;
  traj.samples.push_back({});
  if (launch.speed_vh == 0.0) return traj;
  if (!(launch.angle_theta_h > 0.0 && launch.angle_theta_h <= 90.0)) {
    throw Error(ErrorCode::kInvalidParameter,
                fmt::format("launch angle {} deg does not leave the ground", launch.angle_theta_h));
  }

  const double g = env.gravity_g;
  const double angle = deg_to_rad(launch.angle_theta_h);
  const double vy0 = launch.speed_vh * std::sin(angle);
  const double h = 2.0 * vy0 / g / options.min_steps;

  // State (x, y, vx, vy).
  using State = Eigen::Vector4d;
  const auto f = [g](double, const State& s) -> State { return {s(2), s(3), 0.0, -g}; };
  State s(0.0, 0.0, launch.speed_vh * std::cos(angle), vy0);
  traj.samples.front() = {0.0, 0.0, 0.0, s(2), s(3)};

  double t = 0.0;
  const int max_steps = 2 * options.min_steps + 16;
  for (int step = 0; step < max_steps; ++step) {
    const State next = rk4_step(f, t, s, h);
    if (s(3) > 0.0 && next(3) <= 0.0) {
      const double tau = s(3) / (s(3) - next(3)) * h;
      traj.apex_time = t + tau;
      traj.apex_height = s(1) + s(3) * tau - 0.5 * g * tau * tau;
    }
    if (next(1) <= 0.0) {
      const double frac = s(1) / (s(1) - next(1));
      const double tl = t + frac * h;
      const double xl = s(0) + frac * (next(0) - s(0));
      const double vyl = s(3) + frac * (next(3) - s(3));
      traj.samples.push_back({tl, xl, 0.0, s(2), vyl});
      traj.landing_distance = xl;
      traj.fly_time = tl;
      return traj;
    }
    s = next;
    t += h;
    traj.samples.push_back({t, s(0), s(1), s(2), s(3)});
  }
  throw Error(ErrorCode::kNonConvergence, "flight integration did not reach the ground");
}

JumpOutcome replay_maneuver(double omega_f, double delta_t, const HopperConfig& cfg,
                            const Environment& env, double target, double tolerance_fraction) {
  if (!(target > 0.0)) throw Error(ErrorCode::kInvalidParameter, "replay target must be > 0");
  JumpOutcome out;
  out.target = target;
  out.omega_f = omega_f;
  out.delta_t = delta_t;
  try {
    out.launch.angle_theta_h = hopdyn::launch_angle_for_brake_time(cfg, env, omega_f, delta_t);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kOverBraked) throw;
    out.over_braked = true;
  }
  if (!out.over_braked) {
    out.launch.speed_vh = hopdyn::hop_velocity(cfg, omega_f);
    out.realized = simulate_flight(out.launch, env).landing_distance;
  }
  out.relative_error_pct = control::relative_error(target, out.realized);
  out.within_tolerance = std::abs(out.realized - target) <= tolerance_fraction * target;
  return out;
}

JumpOutcome replay_brake(const control::BrakeResponse& response, const HopperConfig& cfg,
                         const Environment& env, double target, double tolerance_fraction) {
  if (!(response.initial_omega > 0.0)) {
    throw Error(ErrorCode::kInvalidParameter, "replay needs a braking run from a spinning wheel");
  }
  return replay_maneuver(response.initial_omega, response.achieved_delta_t, cfg, env, target,
                         tolerance_fraction);
}

LandingStats aggregate(const std::vector<JumpOutcome>& outcomes) {
  if (outcomes.empty()) throw Error(ErrorCode::kEmptyInput, "no outcomes to aggregate");
  LandingStats stats;
  stats.target = outcomes.front().target;
  stats.count = outcomes.size();
  double sum = 0.0;
  for (const JumpOutcome& o : outcomes) {
    if (o.target != stats.target) {
      throw Error(ErrorCode::kInvalidParameter, "aggregated outcomes must share one target");
    }
    sum += o.realized;
  }
  stats.mean_distance = sum / static_cast<double>(outcomes.size());
  double sq = 0.0;
  for (const JumpOutcome& o : outcomes) {
    const double d = o.realized - stats.mean_distance;
    sq += d * d;
  }
  stats.std_deviation = std::sqrt(sq / static_cast<double>(outcomes.size()));
  stats.relative_error_pct = control::relative_error(stats.target, stats.mean_distance);
  return stats;
}

}  // namespace hopper::ballistics
