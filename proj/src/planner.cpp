#include "hopper/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "hopper/control.hpp"
#include "hopper/error.hpp"
#include "hopper/units.hpp"

namespace hopper::planner {
namespace {

// Range and launch angle as functions of flywheel speed for a fixed slope.
// The braking time is whatever brings the platform to the target angle, but
// never shorter than the actuator floor.
struct RangeModel {
  double eta;
  double lever;
  double gravity;
  double geometric_rad;
  double target_rad;
  double floor;

  double brake_time(double omega) const {
    if (omega <= 0.0) return floor;
    const double needed =
        geometric_rad > target_rad ? 2.0 * (geometric_rad - target_rad) / (eta * omega) : 0.0;
    return std::max(needed, floor);
  }

  double angle_rad(double omega, double delta_t) const {
    return geometric_rad - 0.5 * eta * omega * delta_t;
  }

  double range(double omega) const {
    const double theta = angle_rad(omega, brake_time(omega));
    if (theta <= 0.0) return 0.0;
    const double v = eta * lever * omega;
    return v * v * std::sin(2.0 * theta) / gravity;
  }
};

RangeModel make_range_model(const HopperConfig& cfg, const Environment& env,
                            const PlanOptions& opts) {
  return {hopdyn::energy_ratio(cfg),
          cfg.spike_length_l,
          env.gravity_g,
          deg_to_rad(cfg.half_spike_angle_alpha + env.slope_beta),
          deg_to_rad(opts.target_angle_deg),
          opts.min_brake_time};
}

// Maximizer of a unimodal function on [lo, hi].
double golden_section_max(const auto& f, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < 200 && (b - a) > 1e-12 * std::max(1.0, std::abs(b)); ++i) {
    if (fc < fd) {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    } else {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    }
  }
  return 0.5 * (a + b);
}

// Flywheel speed on the rising branch of the range curve hitting `distance`.
double solve_speed_with_floor(const RangeModel& m, double distance, double omega_start) {
  const double omega_zero = 2.0 * m.geometric_rad / (m.eta * m.floor);
  const auto f = [&](double w) { return m.range(w); };
  const double omega_peak = golden_section_max(f, 0.0, omega_zero);
  if (m.range(omega_peak) < distance) {
    throw Error(ErrorCode::kNoSolution,
                fmt::format("a {:.3g} s brake limits the hop to {:.4g} m (< {:.4g} m)", m.floor,
                            m.range(omega_peak), distance));
  }
  double lo = std::min(omega_start, omega_peak);
  double hi = omega_peak;
  if (m.range(lo) > distance) lo = 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (m.range(mid) < distance ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void PlanOptions::validate() const {
  const bool ok = target_angle_deg > 0.0 && target_angle_deg < 90.0 && spin_fraction > 0.0 &&
                  spin_fraction <= 1.0 && safety_factor > 0.0 && min_brake_time >= 0.0 &&
                  std::isfinite(min_brake_time) && distance_cap > 0.0;
  if (!ok) throw Error(ErrorCode::kInvalidParameter, "invalid planner options");
}

double max_safe_distance(const HopperConfig& cfg, const Environment& env,
                         const PlanOptions& opts) {
  cfg.validate();
  opts.validate();
  if (!std::isfinite(env.escape_velocity)) return opts.distance_cap;
  env.validate();
  const RangeModel m = make_range_model(cfg, env, opts);
  if (m.geometric_rad <= 0.0) return 0.0;
  const double omega_max = opts.safety_factor * env.escape_velocity / (m.eta * m.lever);
  const auto f = [&](double w) { return m.range(w); };
  const double peak = golden_section_max(f, 0.0, omega_max);
  return std::min(std::max(m.range(peak), m.range(omega_max)), opts.distance_cap);
}

JumpPlan plan_jump(double distance, const HopperConfig& cfg, const Environment& env,
                   const PlanOptions& opts) {
  cfg.validate();
  env.validate();
  opts.validate();
  if (!std::isfinite(distance) || distance <= 0.0) {
    throw Error(ErrorCode::kInvalidParameter,
                fmt::format("target distance must be > 0 (got {})", distance));
  }
  if (env.slope_beta <= -cfg.half_spike_angle_alpha) {
    throw Error(ErrorCode::kDegenerateSlope,
                fmt::format("slope {} deg tips the rover past its spike (alpha = {} deg)",
                            env.slope_beta, cfg.half_spike_angle_alpha));
  }

  const RangeModel m = make_range_model(cfg, env, opts);
  const double eta_l = m.eta * m.lever;

  // Ideal maneuver without a braking-time floor.
  const double theta0 = std::min(m.geometric_rad, m.target_rad);
  double omega = std::sqrt(distance * m.gravity / std::sin(2.0 * theta0)) / eta_l;
  double delta_t = m.geometric_rad > m.target_rad
                       ? 2.0 * (m.geometric_rad - m.target_rad) / (m.eta * omega)
                       : 0.0;
  if (delta_t < m.floor) {
    delta_t = m.floor;
    omega = solve_speed_with_floor(m, distance, omega);
  }

  JumpPlan plan;
  plan.target_distance = distance;
  plan.slope_beta = env.slope_beta;
  plan.omega_f = omega;
  plan.delta_t = delta_t;
  plan.brake_torque = hopdyn::brake_torque_from_time(cfg, omega, delta_t);
  plan.launch_angle = rad_to_deg(m.angle_rad(omega, delta_t));
  plan.launch_speed = eta_l * omega;

  const double speed_limit = opts.safety_factor * env.escape_velocity;
  if (plan.launch_speed >= speed_limit) {
    const double safe = max_safe_distance(cfg, env, opts);
    throw EscapeViolation(
        fmt::format("launch speed {:.4g} m/s for a {:.4g} m hop reaches the guarded escape "
                    "speed {:.4g} m/s; max safe distance is {:.4g} m",
                    plan.launch_speed, distance, speed_limit, safe),
        safe);
  }

  const double tau_min = hopdyn::min_torque(cfg, env);
  plan.speedup_time_Tmin = cfg.flywheel_inertia_If * omega / (opts.spin_fraction * tau_min);
  plan.fly_time_Tf = 2.0 * plan.launch_speed * std::sin(deg_to_rad(plan.launch_angle)) / m.gravity;
  plan.predicted_distance = hopdyn::hop_distance({plan.launch_speed, plan.launch_angle}, env);

  if (plan.brake_torque && !hopdyn::braking_approximation_holds(cfg, env, *plan.brake_torque)) {
    plan.warnings.push_back(fmt::format(
        "brake torque {:.3g} N m is within 100x of the gravity moment; the launch angle "
        "estimate ignores gravity during leverage",
        *plan.brake_torque));
  }
  return plan;
}

MissionPlan plan_mission(double total, double tolerance, const HopperConfig& cfg,
                         const Environment& env, const MissionOptions& opts) {
  if (!std::isfinite(total) || total <= 0.0) {
    throw Error(ErrorCode::kInvalidParameter, "mission distance must be > 0");
  }
  if (!std::isfinite(tolerance) || tolerance < 0.0) {
    throw Error(ErrorCode::kInvalidParameter, "mission tolerance must be >= 0");
  }
  if (!(opts.max_hop > 0.0) || opts.max_hops < 1) {
    throw Error(ErrorCode::kInvalidParameter, "invalid mission options");
  }
  const double safe = max_safe_distance(cfg, env, opts.plan);
  if (opts.max_hop > safe) {
    throw Error(ErrorCode::kInvalidParameter,
                fmt::format("max hop {:.4g} m exceeds the max safe distance {:.4g} m",
                            opts.max_hop, safe));
  }

  MissionPlan mission;
  mission.total_distance = total;
  mission.tolerance = tolerance;
  mission.replan_after_each_landing = opts.replan_after_each_landing;

  double remaining = total;
  while (remaining > tolerance) {
    const double hop = std::min(opts.max_hop, remaining);
    mission.hops.push_back(plan_jump(hop, cfg, env, opts.plan));
    remaining -= hop;
  }

  double longest = 0.0;
  for (const JumpPlan& h : mission.hops) longest = std::max(longest, h.target_distance);
  const double ring = opts.expected_accuracy_fraction * longest;
  if (tolerance < ring) {
    mission.warnings.push_back(
        fmt::format("tolerance {:.3g} m is tighter than the expected landing spread of "
                    "{:.3g} m per hop; corrective hops may be needed",
                    tolerance, ring));
  }
  return mission;
}

MissionResult execute_mission(const MissionPlan& mission, const HopperConfig& cfg,
                              const Environment& env, const MissionOptions& opts,
                              const HopExecutor& execute) {
  MissionResult result;
  result.plan = mission;
  double position = 0.0;

  auto fly = [&](JumpPlan plan, int index, int direction) {
    const double realized = execute(plan, index);
    position += direction * realized;
    result.hops.push_back({index, direction, std::move(plan), realized, position});
  };

  if (mission.replan_after_each_landing) {
    for (int index = 0; index < opts.max_hops; ++index) {
      const double remaining = mission.total_distance - position;
      if (std::abs(remaining) <= mission.tolerance) break;
      const int direction = remaining > 0.0 ? 1 : -1;
      Environment leg = env;
      leg.slope_beta = direction * env.slope_beta;
      fly(plan_jump(std::min(opts.max_hop, std::abs(remaining)), cfg, leg, opts.plan), index,
          direction);
    }
  } else {
    int index = 0;
    for (const JumpPlan& plan : mission.hops) fly(plan, index++, 1);
  }

  result.final_position = position;
  result.final_error = std::abs(mission.total_distance - position);
  result.error_pct = control::relative_error(mission.total_distance, position);
  result.within_tolerance = result.final_error <= mission.tolerance;
  if (!result.within_tolerance) {
    result.plan.warnings.push_back(
        fmt::format("mission ended {:.4g} m from the goal after {} hops", result.final_error,
                    result.hops.size()));
  }
  return result;
}

SweepTable sweep_brake_torque(const HopperConfig& cfg, const Environment& env, double omega_f,
                              const SweepRange& range) {
  cfg.validate();
  env.validate();
  if (!(range.tau_lo > 0.0) || !(range.tau_hi > range.tau_lo) || range.samples < 2) {
    throw Error(ErrorCode::kInvalidParameter, "sweep needs 0 < tau_lo < tau_hi and >= 2 samples");
  }

  SweepTable table;
  table.omega_f = omega_f;
  table.slope_beta = env.slope_beta;
  table.rows.resize(static_cast<std::size_t>(range.samples));

  const double geometric = cfg.half_spike_angle_alpha + env.slope_beta;
  const double speed = hopdyn::hop_velocity(cfg, omega_f);
  const double log_lo = std::log(range.tau_lo);
  const double log_step = (std::log(range.tau_hi) - log_lo) / (range.samples - 1);

  // Each row depends only on its index, so the loop order does not affect
  // the table.
  for (int i = 0; i < range.samples; ++i) {
    SweepRow& row = table.rows[static_cast<std::size_t>(i)];
    row.tau = i == 0                   ? range.tau_lo
              : i == range.samples - 1 ? range.tau_hi
                                       : std::exp(log_lo + i * log_step);
    row.theta_deg = geometric - hopdyn::brake_deflection_deg(cfg, omega_f, row.tau);
    row.valid = row.theta_deg > 0.0 && row.theta_deg < 90.0;
    row.distance = row.valid ? hopdyn::hop_distance({speed, row.theta_deg}, env) : 0.0;
  }

  double best = -1.0;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (table.rows[i].valid && table.rows[i].distance > best) {
      best = table.rows[i].distance;
      table.argmax = i;
    }
  }
  return table;
}

std::vector<double> standard_slopes() {
  std::vector<double> slopes;
  for (int beta = 30; beta >= -30; beta -= 5) slopes.push_back(beta);
  return slopes;
}

std::vector<PlanTableRow> plan_table(const HopperConfig& cfg, const Environment& env,
                                     const std::vector<double>& slopes,
                                     const std::vector<double>& distances,
                                     const PlanOptions& opts) {
  std::vector<PlanTableRow> rows;
  rows.reserve(slopes.size() * distances.size());
  for (double beta : slopes) {
    Environment leg = env;
    leg.slope_beta = beta;
    for (double d : distances) {
      PlanTableRow row;
      row.slope_beta = beta;
      row.distance = d;
      try {
        row.plan = plan_jump(d, cfg, leg, opts);
      } catch (const Error& e) {
        row.status = to_string(e.code());
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace hopper::planner
