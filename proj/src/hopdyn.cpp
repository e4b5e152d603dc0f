#include "hopper/hopdyn.hpp"

#include <cmath>

#include <fmt/format.h>

#include "hopper/error.hpp"
#include "hopper/units.hpp"

namespace hopper::hopdyn {
namespace {

void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

double lever_inertia(const HopperConfig& cfg) {
  return cfg.platform_inertia_Ip + cfg.platform_mass_mp * cfg.spike_length_l * cfg.spike_length_l;
}

}  // namespace

void HopperConfig::validate() const {
  require(positive(spike_length_l) && positive(platform_mass_mp) &&
              positive(platform_inertia_Ip) && positive(flywheel_inertia_If) &&
              positive(flywheel_mass_mf),
          ErrorCode::kInvalidParameter, "hopper lengths, masses and inertias must be > 0");
  require(half_spike_angle_alpha > 0.0 && half_spike_angle_alpha < 90.0,
          ErrorCode::kInvalidParameter,
          fmt::format("half spike angle must be in (0, 90) deg (got {})", half_spike_angle_alpha));
  require(flywheel_inertia_If < platform_inertia_Ip, ErrorCode::kInvalidParameter,
          "flywheel inertia must be smaller than the platform inertia");
}

void Environment::validate() const {
  require(positive(gravity_g), ErrorCode::kInvalidParameter, "gravity must be > 0");
  require(std::isfinite(slope_beta) && slope_beta >= -90.0 && slope_beta <= 90.0,
          ErrorCode::kInvalidParameter,
          fmt::format("slope must be in [-90, 90] deg (got {})", slope_beta));
  require(escape_velocity > 0.0, ErrorCode::kInvalidParameter, "escape velocity must be > 0");
}

double min_torque(const HopperConfig& cfg, const Environment& env) {
  const double tilt = cfg.half_spike_angle_alpha + env.slope_beta;
  require(tilt < 180.0, ErrorCode::kInvalidGeometry,
          fmt::format("alpha + beta = {} deg leaves no pivot", tilt));
  return cfg.platform_mass_mp * env.gravity_g * cfg.spike_length_l * std::sin(deg_to_rad(tilt));
}

double energy_ratio(const HopperConfig& cfg) { return cfg.flywheel_inertia_If / lever_inertia(cfg); }

double hop_velocity(const HopperConfig& cfg, double omega_f) {
  require(omega_f >= 0.0, ErrorCode::kInvalidParameter, "flywheel speed must be >= 0");
  return energy_ratio(cfg) * cfg.spike_length_l * omega_f;
}

double launch_angle_instant(const HopperConfig& cfg, const Environment& env) {
  const double theta = cfg.half_spike_angle_alpha + env.slope_beta;
  require(theta > 0.0 && theta < 90.0, ErrorCode::kNonBallistic,
          fmt::format("launch angle {} deg is not a forward ballistic hop", theta));
  return theta;
}

double brake_deflection_deg(const HopperConfig& cfg, double omega_f, double brake_torque) {
  require(brake_torque > 0.0, ErrorCode::kInvalidParameter, "brake torque must be > 0");
  const double eta = energy_ratio(cfg);
  return rad_to_deg(eta * cfg.flywheel_inertia_If * omega_f * omega_f / (2.0 * brake_torque));
}

double launch_angle_braked(const HopperConfig& cfg, const Environment& env, double omega_f,
                           double brake_torque) {
  const double geometric = cfg.half_spike_angle_alpha + env.slope_beta;
  const double deflection = brake_deflection_deg(cfg, omega_f, brake_torque);
  require(deflection < geometric, ErrorCode::kOverBraked,
          fmt::format("brake deflection {:.4g} deg consumes the {:.4g} deg launch angle",
                      deflection, geometric));
  return geometric - deflection;
}

bool braking_approximation_holds(const HopperConfig& cfg, const Environment& env,
                                 double brake_torque) {
  return brake_torque >=
         100.0 * cfg.platform_mass_mp * env.gravity_g * cfg.spike_length_l;
}

std::optional<double> brake_torque_from_time(const HopperConfig& cfg, double omega_f,
                                             double delta_t) {
  require(delta_t >= 0.0, ErrorCode::kInvalidParameter, "braking time must be >= 0");
  if (delta_t == 0.0) return std::nullopt;
  return cfg.flywheel_inertia_If * omega_f / delta_t;
}

double launch_angle_for_brake_time(const HopperConfig& cfg, const Environment& env,
                                   double omega_f, double delta_t) {
  const auto tau = brake_torque_from_time(cfg, omega_f, delta_t);
  if (!tau || omega_f == 0.0) return launch_angle_instant(cfg, env);
  return launch_angle_braked(cfg, env, omega_f, *tau);
}

double hop_distance(const LaunchState& launch, const Environment& env) {
  require(launch.speed_vh >= 0.0, ErrorCode::kInvalidParameter, "launch speed must be >= 0");
  require(launch.angle_theta_h >= 0.0 && launch.angle_theta_h <= 90.0,
          ErrorCode::kInvalidParameter, "launch angle must be within [0, 90] deg");
  return launch.speed_vh * launch.speed_vh * std::sin(2.0 * deg_to_rad(launch.angle_theta_h)) /
         env.gravity_g;
}

double flywheel_speed_instant(double distance, const HopperConfig& cfg, const Environment& env) {
  require(distance >= 0.0, ErrorCode::kInvalidParameter, "distance must be >= 0");
  const double theta = cfg.half_spike_angle_alpha + env.slope_beta;
  require(theta > 0.0 && theta < 90.0, ErrorCode::kNoSolution,
          fmt::format("no instant-brake hop exists at alpha + beta = {} deg", theta));
  const double eta_l = energy_ratio(cfg) * cfg.spike_length_l;
  return std::sqrt(distance * env.gravity_g / (eta_l * eta_l * std::sin(2.0 * deg_to_rad(theta))));
}

double leverage_acceleration(const HopperConfig& cfg, const Environment& env, double theta_deg,
                             double tau, bool approximate) {
  const double inertia = lever_inertia(cfg);
  if (approximate) return -tau / inertia;
  const double gravity_moment =
      cfg.platform_mass_mp * env.gravity_g * cfg.spike_length_l * std::sin(deg_to_rad(theta_deg));
  return (gravity_moment - tau) / inertia;
}

}  // namespace hopper::hopdyn
