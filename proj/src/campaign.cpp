#include "hopper/campaign.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "hopper/error.hpp"

namespace hopper::campaign {

BrakingRig::BrakingRig(const RigConfig& config)
    : config_(config),
      continuous_(motor::build_continuous(config.motor)),
      discrete_(motor::discretize(continuous_, config.sample_time)),
      design_(control::design_controller(discrete_, config.design)) {}

control::BrakeResponse BrakingRig::brake(double initial_omega, double target_delta_t) const {
  return control::simulate_brake(discrete_, design_.gains, initial_omega, target_delta_t,
                                 config_.brake);
}

double BrakingRig::brake_floor(double omega) const { return brake(omega, 0.0).achieved_delta_t; }

planner::JumpPlan plan_flyable_jump(double distance, const hopdyn::HopperConfig& cfg,
                                    const hopdyn::Environment& env, const BrakingRig& rig,
                                    const JumpSettings& settings) {
  planner::JumpPlan plan = planner::plan_jump(distance, cfg, env, settings.plan);
  if (!settings.account_for_brake_floor) return plan;

  planner::PlanOptions opts = settings.plan;
  for (int iteration = 0; iteration < 12; ++iteration) {
    const double floor = std::max(settings.plan.min_brake_time, rig.brake_floor(plan.omega_f));
    if (plan.delta_t >= floor) break;
    opts.min_brake_time = floor;
    try {
      plan = planner::plan_jump(distance, cfg, env, opts);
    } catch (const EscapeViolation&) {
      // The slower brake costs launch angle, and the speed that would make up
      // for it is unsafe: fly the longest hop the guard allows instead.
      const double reach = planner::max_safe_distance(cfg, env, opts);
      plan = planner::plan_jump(reach * (1.0 - 1e-9), cfg, env, opts);
      plan.target_distance = distance;
      plan.warnings.push_back(fmt::format(
          "a {:.3g} s brake limits the safe hop to {:.4g} m; flying that instead of {:.4g} m",
          floor, plan.predicted_distance, distance));
    }
  }
  return plan;
}

FlownJump fly_jump(const planner::JumpPlan& plan, const hopdyn::HopperConfig& cfg,
                   const hopdyn::Environment& env, const BrakingRig& rig,
                   const JumpSettings& settings, std::mt19937_64& rng) {
  const control::Perturbation p =
      control::draw_perturbation(settings.perturbation, plan.omega_f, rng);
  FlownJump jump;
  jump.response = rig.brake(plan.omega_f * p.omega_scale, plan.delta_t);
  jump.response.achieved_delta_t =
      std::max(0.0, jump.response.achieved_delta_t + p.delta_t_offset);
  hopdyn::Environment leg = env;
  leg.slope_beta = plan.slope_beta;
  jump.outcome = ballistics::replay_brake(jump.response, cfg, leg, plan.target_distance,
                                          settings.tolerance_fraction);
  return jump;
}

JumpCampaign run_jump_campaign(double distance, const hopdyn::HopperConfig& cfg,
                               const hopdyn::Environment& env, const BrakingRig& rig,
                               const JumpSettings& settings, int repetitions,
                               std::uint64_t seed) {
  if (repetitions < 1) throw Error(ErrorCode::kInvalidParameter, "repetitions must be >= 1");
  settings.perturbation.validate();
  JumpCampaign campaign;
  campaign.plan = plan_flyable_jump(distance, cfg, env, rig, settings);
  std::mt19937_64 rng(seed);
  for (int i = 0; i < repetitions; ++i) {
    campaign.outcomes.push_back(fly_jump(campaign.plan, cfg, env, rig, settings, rng).outcome);
  }
  campaign.stats = ballistics::aggregate(campaign.outcomes);
  return campaign;
}

planner::MissionResult run_mission(double total, double tolerance,
                                   const hopdyn::HopperConfig& cfg,
                                   const hopdyn::Environment& env, const BrakingRig& rig,
                                   const JumpSettings& settings,
                                   const planner::MissionOptions& mission_options,
                                   std::uint64_t seed) {
  settings.perturbation.validate();
  const planner::MissionPlan mission =
      planner::plan_mission(total, tolerance, cfg, env, mission_options);
  std::mt19937_64 rng(seed);
  const planner::HopExecutor execute = [&](planner::JumpPlan& plan, int) {
    hopdyn::Environment leg = env;
    leg.slope_beta = plan.slope_beta;
    plan = plan_flyable_jump(plan.target_distance, cfg, leg, rig, settings);
    return fly_jump(plan, cfg, env, rig, settings, rng).outcome.realized;
  };
  return planner::execute_mission(mission, cfg, env, mission_options, execute);
}

}  // namespace hopper::campaign
