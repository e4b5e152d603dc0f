#include "hopper/export.hpp"

#include <fstream>
#include <system_error>

#include <fmt/format.h>

#include "hopper/error.hpp"

namespace hopper::io {
namespace {

// Integral values keep a trailing ".0" off; everything else is the
// shortest representation that round-trips.
std::string num(double v) { return fmt::format("{}", v); }

std::string pole_text(const std::complex<double>& p) {
  if (p.imag() == 0.0) return num(p.real());
  return fmt::format("{}{}{}j", num(p.real()), p.imag() < 0.0 ? "-" : "+", num(std::abs(p.imag())));
}

}  // namespace

std::string sig4(double value) { return fmt::format("{:.4g}", value); }

std::string brake_csv(const control::BrakeResponse& r) {
  std::string out = "time_s,omega_rad_s,voltage_V\n";
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    out += fmt::format("{},{},{}\n", num(r.times[k]), num(r.omega[k]), num(r.voltage[k]));
  }
  return out;
}

std::string trajectory_csv(const ballistics::Trajectory& trajectory) {
  std::string out = "t_s,x_m,y_m\n";
  for (const auto& s : trajectory.samples) {
    out += fmt::format("{},{},{}\n", num(s.t), num(s.x), num(s.y));
  }
  return out;
}

std::string sweep_csv(const planner::SweepTable& table) {
  std::string out = "tau_Nm,theta_deg,d_m\n";
  for (const auto& row : table.rows) {
    out += fmt::format("{},{},{}\n", num(row.tau), num(row.theta_deg), num(row.distance));
  }
  return out;
}

std::string outcomes_csv(const std::vector<ballistics::JumpOutcome>& outcomes) {
  std::string out =
      "run,target_m,realized_m,rel_err_pct,within_tolerance,over_braked,omega_rad_s,"
      "delta_t_s,launch_speed_m_s,theta_deg\n";
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", i + 1, num(o.target), num(o.realized),
                       num(o.relative_error_pct), o.within_tolerance ? 1 : 0,
                       o.over_braked ? 1 : 0, num(o.omega_f), num(o.delta_t),
                       num(o.launch.speed_vh), num(o.launch.angle_theta_h));
  }
  return out;
}

std::string stats_csv(const std::vector<ballistics::LandingStats>& stats) {
  std::string out = "target_m,mean_m,std_m,rel_err_pct\n";
  for (const auto& s : stats) {
    out += fmt::format("{},{},{},{}\n", num(s.target), num(s.mean_distance),
                       num(s.std_deviation), num(s.relative_error_pct));
  }
  return out;
}

std::string plan_table_csv(const std::vector<planner::PlanTableRow>& rows) {
  std::string out =
      "beta_deg,d_m,omega_rad_s,speedup_s,delta_t_s,launch_speed_m_s,theta_deg,fly_time_s,"
      "status\n";
  for (const auto& row : rows) {
    if (row.plan) {
      const auto& p = *row.plan;
      out += fmt::format("{},{},{},{},{},{},{},{},{}\n", num(row.slope_beta), num(row.distance),
                         num(p.omega_f), num(p.speedup_time_Tmin), num(p.delta_t),
                         num(p.launch_speed), num(p.launch_angle), num(p.fly_time_Tf),
                         row.status);
    } else {
      out += fmt::format("{},{},,,,,,,{}\n", num(row.slope_beta), num(row.distance), row.status);
    }
  }
  return out;
}

std::string mission_csv(const planner::MissionResult& result) {
  std::string out =
      "hop,direction,target_m,realized_m,position_m,omega_rad_s,delta_t_s,beta_deg\n";
  for (const auto& h : result.hops) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", h.index, h.direction,
                       num(h.plan.target_distance), num(h.realized), num(h.position_after),
                       num(h.plan.omega_f), num(h.plan.delta_t), num(h.plan.slope_beta));
  }
  return out;
}

Json to_json(const planner::JumpPlan& p) {
  Json j;
  j["target_distance_m"] = p.target_distance;
  j["slope_beta_deg"] = p.slope_beta;
  j["omega_f_rad_s"] = p.omega_f;
  j["delta_t_s"] = p.delta_t;
  j["brake_torque_Nm"] = p.brake_torque ? Json(*p.brake_torque) : Json(nullptr);
  j["instant_brake"] = p.instant_brake();
  j["launch_angle_deg"] = p.launch_angle;
  j["launch_speed_m_s"] = p.launch_speed;
  j["speedup_time_s"] = p.speedup_time_Tmin;
  j["fly_time_s"] = p.fly_time_Tf;
  j["predicted_distance_m"] = p.predicted_distance;
  j["warnings"] = p.warnings;
  return j;
}

Json to_json(const planner::MissionResult& r) {
  Json j;
  j["total_distance_m"] = r.plan.total_distance;
  j["tolerance_m"] = r.plan.tolerance;
  j["replan_after_each_landing"] = r.plan.replan_after_each_landing;
  Json initial = Json::array();
  for (const auto& p : r.plan.hops) initial.push_back(to_json(p));
  j["initial_hops"] = std::move(initial);
  Json flown = Json::array();
  for (const auto& h : r.hops) {
    Json hop;
    hop["index"] = h.index;
    hop["direction"] = h.direction;
    hop["realized_m"] = h.realized;
    hop["position_after_m"] = h.position_after;
    hop["plan"] = to_json(h.plan);
    flown.push_back(std::move(hop));
  }
  j["hops"] = std::move(flown);
  j["final_position_m"] = r.final_position;
  j["final_error_m"] = r.final_error;
  j["error_pct"] = r.error_pct;
  j["within_tolerance"] = r.within_tolerance;
  j["warnings"] = r.plan.warnings;
  return j;
}

Json to_json(const control::ControllerDesign& d) {
  Json j;
  j["overshoot_pct"] = d.spec.overshoot_pct;
  j["settling_time_s"] = d.spec.settling_time;
  j["sample_time_s"] = d.sample_time ? Json(*d.sample_time) : Json(nullptr);
  j["K"] = {d.gains.feedback_K(0), d.gains.feedback_K(1)};
  j["G"] = d.gains.feedforward_G;
  j["continuous_poles"] = {pole_text(d.continuous_poles[0]), pole_text(d.continuous_poles[1])};
  j["placed_poles"] = {pole_text(d.placed_poles[0]), pole_text(d.placed_poles[1])};
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) {
    throw Error(ErrorCode::kIo, fmt::format("cannot create '{}': {}",
                                            path.parent_path().string(), ec.message()));
  }
  std::ofstream out(path, std::ios::binary);
  out << content;
  out.close();
  if (!out) throw Error(ErrorCode::kIo, fmt::format("cannot write '{}'", path.string()));
}

}  // namespace hopper::io
