#include <cmath>

#include <gtest/gtest.h>

#include "hopper/ballistics.hpp"
#include "hopper/error.hpp"
#include "hopper/units.hpp"

using namespace hopper;
using namespace hopper::ballistics;

namespace {

HopperConfig cube() { return {45.0, 0.071, 1.5, 25e-4, 3.42e-5, 0.076}; }
Environment itokawa(double beta = 0.0) { return {77e-6, beta, 0.1128}; }

}  // namespace

TEST(Ballistics, FlightMatchesClosedForm) {
  const Environment env = itokawa();
  for (double theta : {10.0, 30.0, 45.0, 60.0, 85.0}) {
    for (double v : {0.01, 0.05, 0.1}) {
      const auto f = simulate_flight({v, theta}, env);
      const double s = std::sin(deg_to_rad(theta)), c = std::cos(deg_to_rad(theta));
      EXPECT_NEAR(f.landing_distance, v * v * 2 * s * c / env.gravity_g, 1e-9 * f.landing_distance);
      EXPECT_NEAR(f.fly_time, 2 * v * s / env.gravity_g, 1e-9 * f.fly_time);
      EXPECT_NEAR(f.apex_time, v * s / env.gravity_g, 1e-9 * f.apex_time);
      EXPECT_NEAR(f.apex_height, v * v * s * s / (2 * env.gravity_g), 1e-9 * f.apex_height);
      EXPECT_GE(f.samples.size(), 2000u);
    }
  }
}

TEST(Ballistics, EnergyIsConserved) {
  const Environment env = itokawa();
  const auto f = simulate_flight({0.0877, 45.0}, env);
  const auto energy = [&](const TrajectorySample& s) {
    return 0.5 * (s.vx * s.vx + s.vy * s.vy) + env.gravity_g * s.y;
  };
  const double e0 = energy(f.samples.front());
  for (const auto& s : f.samples) EXPECT_NEAR(energy(s), e0, 1e-12 * e0);
  for (std::size_t i = 1; i < f.samples.size(); ++i) EXPECT_GT(f.samples[i].t, f.samples[i - 1].t);
}

TEST(Ballistics, StationaryLaunchIsSinglePoint) {
  const auto f = simulate_flight({0.0, 45.0}, itokawa());
  EXPECT_EQ(f.samples.size(), 1u);
  EXPECT_DOUBLE_EQ(f.landing_distance, 0.0);
  EXPECT_DOUBLE_EQ(f.fly_time, 0.0);
}

TEST(Ballistics, RejectsBadLaunch) {
  EXPECT_THROW(simulate_flight({-0.1, 45.0}, itokawa()), Error);
  EXPECT_THROW(simulate_flight({0.1, 45.0}, itokawa(), {1}), Error);
}

TEST(Ballistics, MeasuredRunReplay) {
  // 260.02 rad/s, 0.79 s brake on a 20 degree slope lands near 51.35 m.
  const auto o = replay_maneuver(260.02, 0.79, cube(), itokawa(20), 50.0);
  EXPECT_NEAR(o.realized, 51.35, 0.025 * 51.35);
  EXPECT_TRUE(o.within_tolerance);
  EXPECT_FALSE(o.over_braked);
  EXPECT_NEAR(o.relative_error_pct, std::abs(o.realized - 50.0) / 50.0 * 100, 1e-12);
}

TEST(Ballistics, OverBrakedRunGoesNowhere) {
  const auto o = replay_maneuver(100.0, 10.0, cube(), itokawa(-20), 10.0);
  EXPECT_TRUE(o.over_braked);
  EXPECT_DOUBLE_EQ(o.realized, 0.0);
  EXPECT_FALSE(o.within_tolerance);
  EXPECT_DOUBLE_EQ(o.relative_error_pct, 100.0);
}

TEST(Ballistics, ReplayBrakeUsesAchievedTime) {
  control::BrakeResponse r;
  r.initial_omega = 256.67;
  r.achieved_delta_t = 0.80;
  const auto a = replay_brake(r, cube(), itokawa(20), 50.0);
  const auto b = replay_maneuver(256.67, 0.80, cube(), itokawa(20), 50.0);
  EXPECT_DOUBLE_EQ(a.realized, b.realized);
  r.initial_omega = 0.0;
  EXPECT_THROW(replay_brake(r, cube(), itokawa(20), 50.0), Error);
}

TEST(Ballistics, AggregateStatistics) {
  std::vector<JumpOutcome> outs(3);
  const double realized[] = {48.0, 50.0, 55.0};
  for (int i = 0; i < 3; ++i) {
    outs[i].target = 50.0;
    outs[i].realized = realized[i];
  }
  const auto s = aggregate(outs);
  EXPECT_EQ(s.count, 3u);
  EXPECT_DOUBLE_EQ(s.mean_distance, 51.0);
  EXPECT_NEAR(s.std_deviation, std::sqrt((9.0 + 1.0 + 16.0) / 3.0), 1e-12);
  EXPECT_NEAR(s.relative_error_pct, 2.0, 1e-12);

  const auto one = aggregate({outs[0]});
  EXPECT_DOUBLE_EQ(one.std_deviation, 0.0);

  try {
    aggregate({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyInput);
  }
  outs[1].target = 10.0;
  EXPECT_THROW(aggregate(outs), Error);
}
