#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hopper/error.hpp"
#include "hopper/hopdyn.hpp"
#include "hopper/units.hpp"

using namespace hopper;
using namespace hopper::hopdyn;

namespace {

HopperConfig cube() { return {45.0, 0.071, 1.5, 25e-4, 3.42e-5, 0.076}; }
Environment itokawa(double beta = 0.0) { return {77e-6, beta, 0.1128}; }

ErrorCode code_of(const auto& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

}  // namespace

TEST(Hopdyn, EnergyRatio) {
  EXPECT_NEAR(energy_ratio(cube()), 3.42e-5 / (25e-4 + 1.5 * 0.071 * 0.071), 1e-18);
  EXPECT_NEAR(energy_ratio(cube()), 3.3991e-3, 1e-7);
}

TEST(Hopdyn, HopVelocityIsLinearInSpeed) {
  EXPECT_DOUBLE_EQ(hop_velocity(cube(), 0.0), 0.0);
  EXPECT_NEAR(hop_velocity(cube(), 363.0), 0.0876, 1e-4);
  EXPECT_NEAR(hop_velocity(cube(), 200.0), 2.0 * hop_velocity(cube(), 100.0), 1e-16);
  EXPECT_EQ(code_of([] { hop_velocity(cube(), -1.0); }), ErrorCode::kInvalidParameter);
}

TEST(Hopdyn, MinTorque) {
  EXPECT_NEAR(min_torque(cube(), itokawa()), 1.5 * 77e-6 * 0.071 * std::sin(deg_to_rad(45.0)), 1e-18);
  EXPECT_GT(min_torque(cube(), itokawa(20)), min_torque(cube(), itokawa(-20)));
  HopperConfig steep = cube();
  steep.half_spike_angle_alpha = 89.0;
  Environment env = itokawa(91.0);  // unvalidated: alpha + beta = 180
  EXPECT_EQ(code_of([&] { min_torque(steep, env); }), ErrorCode::kInvalidGeometry);
}

TEST(Hopdyn, InstantLaunchAngleIsAdditive) {
  EXPECT_DOUBLE_EQ(launch_angle_instant(cube(), itokawa(-15)), 30.0);
  EXPECT_DOUBLE_EQ(launch_angle_instant(cube(), itokawa(20)), 65.0);
  EXPECT_EQ(code_of([] { launch_angle_instant(cube(), itokawa(-45)); }), ErrorCode::kNonBallistic);
  EXPECT_EQ(code_of([] { launch_angle_instant(cube(), itokawa(50)); }), ErrorCode::kNonBallistic);
}

TEST(Hopdyn, BrakedAngleAndTimeFormsAgree) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> w(50.0, 400.0), dt(0.05, 3.0), beta(-30.0, 30.0);
  for (int i = 0; i < 500; ++i) {
    const double omega = w(rng), t = dt(rng);
    const Environment env = itokawa(beta(rng));
    const double tau = *brake_torque_from_time(cube(), omega, t);
    const double deflection = rad_to_deg(0.5 * energy_ratio(cube()) * omega * t);
    EXPECT_NEAR(brake_deflection_deg(cube(), omega, tau), deflection, 1e-12 * deflection);
    const double geometric = 45.0 + env.slope_beta;
    if (deflection < geometric) {
      EXPECT_NEAR(launch_angle_for_brake_time(cube(), env, omega, t), geometric - deflection, 1e-12);
    } else {
      EXPECT_EQ(code_of([&] { launch_angle_for_brake_time(cube(), env, omega, t); }),
                ErrorCode::kOverBraked);
    }
  }
}

TEST(Hopdyn, ZeroBrakeTimeMeansInstantStop) {
  EXPECT_FALSE(brake_torque_from_time(cube(), 300.0, 0.0).has_value());
  EXPECT_DOUBLE_EQ(launch_angle_for_brake_time(cube(), itokawa(10), 300.0, 0.0), 55.0);
  EXPECT_EQ(code_of([] { brake_torque_from_time(cube(), 300.0, -0.1); }), ErrorCode::kInvalidParameter);
}

TEST(Hopdyn, DeflectionShrinksWithTorque) {
  double prev = 1e9;
  for (double tau = 1e-2; tau <= 10.0; tau *= 1.5) {
    const double d = brake_deflection_deg(cube(), 366.5, tau);
    EXPECT_LT(d, prev);
    prev = d;
  }
}

TEST(Hopdyn, RangeFormula) {
  const Environment env = itokawa();
  EXPECT_NEAR(hop_distance({0.0877, 45.0}, env), 0.0877 * 0.0877 / 77e-6, 1e-9);
  EXPECT_NEAR(hop_distance({0.05, 30.0}, env), hop_distance({0.05, 60.0}, env), 1e-12);
  EXPECT_DOUBLE_EQ(hop_distance({0.05, 0.0}, env), 0.0);
  EXPECT_EQ(code_of([&] { hop_distance({-0.1, 45.0}, env); }), ErrorCode::kInvalidParameter);
}

TEST(Hopdyn, InstantSpeedInvertsRange) {
  for (double beta : {-30.0, -15.0, 0.0, 10.0, 30.0}) {
    const Environment env = itokawa(beta);
    for (double d : {5.0, 50.0, 100.0}) {
      const double w = flywheel_speed_instant(d, cube(), env);
      const LaunchState ls{hop_velocity(cube(), w), launch_angle_instant(cube(), env)};
      EXPECT_NEAR(hop_distance(ls, env), d, 1e-10 * d);
    }
  }
  // -15 degrees, 100 m: the instant-brake reference case near 390 rad/s.
  EXPECT_NEAR(flywheel_speed_instant(100.0, cube(), itokawa(-15)), 390.0, 2.0);
  EXPECT_EQ(code_of([] { flywheel_speed_instant(10.0, cube(), itokawa(-45)); }), ErrorCode::kNoSolution);
}

TEST(Hopdyn, ApproximationGuard) {
  const double limit = 100.0 * 1.5 * 77e-6 * 0.071;
  EXPECT_TRUE(braking_approximation_holds(cube(), itokawa(), limit));
  EXPECT_FALSE(braking_approximation_holds(cube(), itokawa(), 0.5 * limit));
}

TEST(Hopdyn, LeverageAcceleration) {
  const double i = 25e-4 + 1.5 * 0.071 * 0.071;
  EXPECT_NEAR(leverage_acceleration(cube(), itokawa(), 45.0, 0.1, true), -0.1 / i, 1e-12);
  const double exact = leverage_acceleration(cube(), itokawa(), 45.0, 0.1, false);
  EXPECT_GT(exact, -0.1 / i);
  EXPECT_NEAR(exact, -0.1 / i, 1e-3 * 0.1 / i);
}

TEST(Hopdyn, ConfigValidation) {
  HopperConfig c = cube();
  c.spike_length_l = 0.0;
  EXPECT_THROW(c.validate(), Error);
  c = cube();
  c.flywheel_inertia_If = 1.0;
  EXPECT_THROW(c.validate(), Error);
  Environment e = itokawa();
  e.gravity_g = 0.0;
  EXPECT_THROW(e.validate(), Error);
}
