#pragma once

#include <optional>

namespace hopper::hopdyn {

/// Geometry and inertia of the cubic rover. Angles in degrees.
struct HopperConfig {
  double half_spike_angle_alpha = 45.0;  // [deg]
  double spike_length_l = 0.0;           // [m]
  double platform_mass_mp = 0.0;         // [kg]
  double platform_inertia_Ip = 0.0;      // [kg m^2]
  double flywheel_inertia_If = 0.0;      // [kg m^2]
  double flywheel_mass_mf = 0.0;         // [kg]

  void validate() const;
};

/// Target body. Slope is positive counter-clockwise, in degrees.
struct Environment {
  double gravity_g = 0.0;        // [m/s^2]
  double slope_beta = 0.0;       // [deg]
  double escape_velocity = 0.0;  // [m/s]

  void validate() const;
};

struct LaunchState {
  double speed_vh = 0.0;       // [m/s]
  double angle_theta_h = 0.0;  // [deg]
};

/// Torque needed to tip the rover about a spike from rest:
/// m_p g l sin(alpha + beta).
double min_torque(const HopperConfig& cfg, const Environment& env);

/// I_f / (I_p + m_p l^2).
double energy_ratio(const HopperConfig& cfg);

/// Platform launch speed after transferring the flywheel momentum.
double hop_velocity(const HopperConfig& cfg, double omega_f);

/// Launch angle for an instantaneous stop: alpha + beta.
/// Throws Error(kNonBallistic) outside (0, 90) degrees.
double launch_angle_instant(const HopperConfig& cfg, const Environment& env);

/// alpha + beta minus the rotation accumulated while braking with mean
/// torque `brake_torque`. Throws Error(kOverBraked) if nothing is left.
double launch_angle_braked(const HopperConfig& cfg, const Environment& env, double omega_f,
                           double brake_torque);

/// Rotation of the platform during a finite brake, eta I_f omega^2 / (2 tau) [deg].
double brake_deflection_deg(const HopperConfig& cfg, double omega_f, double brake_torque);

/// Whether the braking torque dominates the gravity moment enough for the
/// gravity-free leverage approximation (tau >= 100 m_p g l).
bool braking_approximation_holds(const HopperConfig& cfg, const Environment& env,
                                 double brake_torque);

/// Mean torque that removes I_f omega in delta_t. An empty result marks an
/// instantaneous stop (delta_t == 0); callers use the instant-brake angle.
std::optional<double> brake_torque_from_time(const HopperConfig& cfg, double omega_f,
                                             double delta_t);

/// Launch angle for a brake of duration delta_t (instant angle when 0).
double launch_angle_for_brake_time(const HopperConfig& cfg, const Environment& env,
                                   double omega_f, double delta_t);

/// Range over a landing plane at launch height: v^2 sin(2 theta) / g.
double hop_distance(const LaunchState& launch, const Environment& env);

/// Flywheel speed giving distance d with an instantaneous brake.
/// Throws Error(kNoSolution) unless 0 < alpha + beta < 90.
double flywheel_speed_instant(double distance, const HopperConfig& cfg, const Environment& env);

/// Angular acceleration of the platform about the spike during leverage.
/// `approximate` drops the gravity moment.
double leverage_acceleration(const HopperConfig& cfg, const Environment& env, double theta_deg,
                             double tau, bool approximate);

}  // namespace hopper::hopdyn
