#include "hopper/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "hopper/campaign.hpp"
#include "hopper/config.hpp"
#include "hopper/error.hpp"
#include "hopper/export.hpp"

namespace hopper::cli {
namespace {

namespace fs = std::filesystem;
using io::sig4;

struct Globals {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

config::RunConfig load(const Globals& g) {
  std::string path = g.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv(config::kConfigEnvVar); env != nullptr) path = env;
  }
  config::RunConfig cfg = path.empty() ? config::itokawa_defaults() : config::load_config(path);
  if (!g.out_dir.empty()) cfg.output_dir = g.out_dir;
  if (g.seed) cfg.seed = *g.seed;
  return cfg;
}

void print_plan(std::ostream& out, const planner::JumpPlan& p) {
  fmt::print(out, "distance   {} m on beta = {} deg\n", sig4(p.target_distance), sig4(p.slope_beta));
  fmt::print(out, "omega_f    {} rad/s\n", sig4(p.omega_f));
  fmt::print(out, "delta_t    {} s{}\n", sig4(p.delta_t), p.instant_brake() ? " (instant)" : "");
  if (p.brake_torque) fmt::print(out, "tau        {} N m\n", sig4(*p.brake_torque));
  fmt::print(out, "theta_h    {} deg\n", sig4(p.launch_angle));
  fmt::print(out, "v_h        {} m/s\n", sig4(p.launch_speed));
  fmt::print(out, "T_min      {} s\n", sig4(p.speedup_time_Tmin));
  fmt::print(out, "T_f        {} s\n", sig4(p.fly_time_Tf));
  for (const auto& w : p.warnings) fmt::print(out, "warning: {}\n", w);
}

int cmd_plan(const Globals& g, double d, double beta, std::ostream& out) {
  config::RunConfig cfg = load(g);
  cfg.env.slope_beta = beta;
  const planner::JumpPlan plan = planner::plan_jump(d, cfg.hopper, cfg.env, cfg.plan);
  const fs::path path = fs::path(cfg.output_dir) / "plan.json";
  io::write_text(path, io::to_json(plan).dump(2) + "\n");
  print_plan(out, plan);
  fmt::print(out, "wrote {}\n", path.string());
  return kExitOk;
}

int cmd_brake(const Globals& g, double omega, double dt, std::ostream& out) {
  const config::RunConfig cfg = load(g);
  const fs::path dir(cfg.output_dir);
  const campaign::BrakingRig rig(cfg.rig());
  io::write_text(dir / "design.json", io::to_json(rig.design()).dump(2) + "\n");

  control::BrakeResponse response;
  if (omega == 0.0) {
    response.target_delta_t = dt;
    fmt::print(out, "flywheel at rest: empty maneuver\n");
  } else {
    response = rig.brake(omega, dt);
    fmt::print(out, "omega_0     {} rad/s\n", sig4(omega));
    fmt::print(out, "target dt   {} s\n", sig4(dt));
    fmt::print(out, "achieved dt {} s\n", sig4(response.achieved_delta_t));
    fmt::print(out, "final omega {} rad/s\n", sig4(response.final_omega()));
  }
  io::write_text(dir / "brake.csv", io::brake_csv(response));
  fmt::print(out, "wrote {}\n", (dir / "brake.csv").string());
  return kExitOk;
}

int cmd_jump(const Globals& g, double d, double beta, int reps, std::ostream& out) {
  config::RunConfig cfg = load(g);
  cfg.env.slope_beta = beta;
  const campaign::BrakingRig rig(cfg.rig());
  const campaign::JumpCampaign c = campaign::run_jump_campaign(
      d, cfg.hopper, cfg.env, rig, cfg.jump_settings(), reps, cfg.seed);
  const fs::path dir(cfg.output_dir);
  io::write_text(dir / "plan.json", io::to_json(c.plan).dump(2) + "\n");
  io::write_text(dir / "outcomes.csv", io::outcomes_csv(c.outcomes));
  io::write_text(dir / "stats.csv", io::stats_csv({c.stats}));
  print_plan(out, c.plan);
  fmt::print(out, "{} runs: mean {} m, std {} m, error {} %\n", c.stats.count,
             sig4(c.stats.mean_distance), sig4(c.stats.std_deviation),
             sig4(c.stats.relative_error_pct));
  fmt::print(out, "wrote {}\n", (dir / "outcomes.csv").string());
  return kExitOk;
}

int cmd_sweep(const Globals& g, double omega, double beta, int samples, std::ostream& out) {
  config::RunConfig cfg = load(g);
  cfg.env.slope_beta = beta;
  planner::SweepRange range;
  range.samples = samples;
  const planner::SweepTable table = planner::sweep_brake_torque(cfg.hopper, cfg.env, omega, range);
  const fs::path path = fs::path(cfg.output_dir) / "sweep.csv";
  io::write_text(path, io::sweep_csv(table));
  const planner::SweepRow& best = table.best();
  fmt::print(out, "argmax: tau = {} N m, theta = {} deg, d = {} m\n", sig4(best.tau),
             sig4(best.theta_deg), sig4(best.distance));
  fmt::print(out, "wrote {}\n", path.string());
  return kExitOk;
}

int cmd_mission(const Globals& g, double total, double tol, std::optional<double> max_hop,
                const std::vector<double>& landings, std::ostream& out) {
  config::RunConfig cfg = load(g);
  if (max_hop) cfg.mission.max_hop = *max_hop;
  planner::MissionResult result;
  if (landings.empty()) {
    const campaign::BrakingRig rig(cfg.rig());
    result = campaign::run_mission(total, tol, cfg.hopper, cfg.env, rig, cfg.jump_settings(),
                                   cfg.mission, cfg.seed);
  } else {
    // Replay measured landings; past the end of the list hops land as planned.
    const planner::MissionPlan mission =
        planner::plan_mission(total, tol, cfg.hopper, cfg.env, cfg.mission);
    const planner::HopExecutor replay = [&](planner::JumpPlan& plan, int index) {
      const auto i = static_cast<std::size_t>(index);
      return i < landings.size() ? landings[i] : plan.predicted_distance;
    };
    result = planner::execute_mission(mission, cfg.hopper, cfg.env, cfg.mission, replay);
  }

  const fs::path dir(cfg.output_dir);
  io::write_text(dir / "mission.json", io::to_json(result).dump(2) + "\n");
  io::write_text(dir / "mission.csv", io::mission_csv(result));
  for (const auto& h : result.hops) {
    fmt::print(out, "hop {}: target {} m, realized {} m, position {} m\n", h.index + 1,
               sig4(h.plan.target_distance), sig4(h.realized), sig4(h.position_after));
  }
  fmt::print(out, "total {} m, error {} m ({} %), {}\n", sig4(result.final_position),
             sig4(result.final_error), sig4(result.error_pct),
             result.within_tolerance ? "within tolerance" : "OUTSIDE tolerance");
  for (const auto& w : result.plan.warnings) fmt::print(out, "warning: {}\n", w);
  fmt::print(out, "wrote {}\n", (dir / "mission.json").string());
  return kExitOk;
}

int cmd_tables(const Globals& g, std::vector<double> slopes, int reps, std::ostream& out) {
  const config::RunConfig cfg = load(g);
  if (slopes.empty()) slopes = planner::standard_slopes();
  const std::vector<double> distances(planner::kTableDistances.begin(),
                                      planner::kTableDistances.end());
  const auto rows = planner::plan_table(cfg.hopper, cfg.env, slopes, distances, cfg.plan);
  const fs::path dir(cfg.output_dir);
  io::write_text(dir / "table3.csv", io::plan_table_csv(rows));
  fmt::print(out, "wrote {} ({} rows)\n", (dir / "table3.csv").string(), rows.size());

  if (reps < 1) return kExitOk;
  const campaign::BrakingRig rig(cfg.rig());
  for (double beta : slopes) {
    hopdyn::Environment env = cfg.env;
    env.slope_beta = beta;
    std::vector<ballistics::LandingStats> stats;
    for (double d : distances) {
      try {
        stats.push_back(campaign::run_jump_campaign(d, cfg.hopper, env, rig, cfg.jump_settings(),
                                                    reps, cfg.seed)
                            .stats);
      } catch (const Error& e) {
        fmt::print(out, "beta {} d {}: skipped ({})\n", beta, d, to_string(e.code()));
      }
    }
    const fs::path path = dir / fmt::format("stats_beta_{}.csv", beta);
    io::write_text(path, io::stats_csv(stats));
    fmt::print(out, "wrote {}\n", path.string());
  }
  return kExitOk;
}

int cmd_config(const Globals& g, std::ostream& out) {
  out << config::to_ini(load(g));
  return kExitOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEscapeViolation:
      return kExitEscape;
    case ErrorCode::kNonConvergence:
      return kExitNonConvergence;
    case ErrorCode::kIo:
      return kExitIo;
    default:
      return kExitValidation;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Flywheel hopping rover: jump planning, braking control and flight replay"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config_path,
                 fmt::format("scenario file (default: ${} or built-in Itokawa values)",
                             config::kConfigEnvVar));
  app.add_option("--out", g.out_dir, "output directory (overrides the config)");
  auto* seed_opt = app.add_option("--seed", seed, "random seed (overrides the config)");

  double d = 0.0, beta = 0.0, omega = 0.0, dt = 0.0, total = 0.0, tol = 0.0, max_hop = 0.0;
  int reps = 14, samples = 301, table_reps = 0;
  std::vector<double> landings, slopes;

  auto* plan = app.add_subcommand("plan", "solve flywheel speed and braking time for a hop");
  plan->add_option("--d", d, "hop distance [m]")->required();
  plan->add_option("--beta", beta, "surface slope [deg]");

  auto* brake = app.add_subcommand("brake", "simulate closed-loop braking");
  brake->add_option("--omega", omega, "initial flywheel speed [rad/s]")->required();
  brake->add_option("--dt", dt, "requested braking time [s]")->required();

  auto* jump = app.add_subcommand("jump", "plan, brake and fly repeated hops");
  jump->add_option("--d", d, "hop distance [m]")->required();
  jump->add_option("--beta", beta, "surface slope [deg]");
  jump->add_option("--reps", reps, "repetitions")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "distance and launch angle against brake torque");
  sweep->add_option("--omega", omega, "flywheel speed [rad/s]")->required();
  sweep->add_option("--beta", beta, "surface slope [deg]");
  sweep->add_option("--samples", samples, "log-spaced torque samples")->capture_default_str();

  auto* mission = app.add_subcommand("mission", "sequence hops toward a distant goal");
  mission->add_option("--total", total, "goal distance [m]")->required();
  mission->add_option("--tol", tol, "landing tolerance [m]")->required();
  auto* max_hop_opt = mission->add_option("--max-hop", max_hop, "longest single hop [m]");
  mission->add_option("--landings", landings, "measured hop distances to replay [m]")
      ->delimiter(',');

  auto* tables = app.add_subcommand("tables", "plan grid over slopes and distances");
  tables->add_option("--beta", slopes, "slopes [deg] (default +30..-30 by 5)")->delimiter(',');
  tables->add_option("--reps", table_reps, "Monte-Carlo repetitions per cell (0: plans only)")
      ->capture_default_str();

  auto* dump = app.add_subcommand("config", "print the effective configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitValidation;
  }
  if (*seed_opt) g.seed = seed;

  try {
    if (*plan) return cmd_plan(g, d, beta, out);
    if (*brake) return cmd_brake(g, omega, dt, out);
    if (*jump) return cmd_jump(g, d, beta, reps, out);
    if (*sweep) return cmd_sweep(g, omega, beta, samples, out);
    if (*mission) {
      return cmd_mission(g, total, tol, *max_hop_opt ? std::optional(max_hop) : std::nullopt,
                         landings, out);
    }
    if (*tables) return cmd_tables(g, slopes, table_reps, out);
    if (*dump) return cmd_config(g, out);
  } catch (const EscapeViolation& e) {
    fmt::print(err, "error [escape-violation]: {}\n", e.what());
    return kExitEscape;
  } catch (const Error& e) {
    fmt::print(err, "error [{}]: {}\n", to_string(e.code()), e.what());
    return exit_code_for(e.code());
  }
  return kExitValidation;
}

}  // namespace hopper::cli
