#include "hopper/config.hpp"

#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "hopper/error.hpp"

namespace hopper::config {
namespace {

struct Field {
  std::string section;
  std::string key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

[[noreturn]] void bad_value(const std::string& section, const std::string& key,
                            const std::string& value) {
  throw Error(ErrorCode::kInvalidParameter,
              fmt::format("config [{}] {}: cannot parse '{}'", section, key, value));
}

double parse_double(const std::string& s, const std::string& section, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (s.find_first_not_of(" \t", used) != std::string::npos) bad_value(section, key, s);
    return v;
  } catch (const std::logic_error&) {
    bad_value(section, key, s);
  }
}

bool parse_bool(const std::string& s, const std::string& section, const std::string& key) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  bad_value(section, key, s);
}

template <typename Ref>
Field real(std::string section, std::string key, Ref ref) {
  return {section, key,
          [=](RunConfig& c, const std::string& v) { ref(c) = parse_double(v, section, key); },
          [=](const RunConfig& c) { return fmt::format("{}", ref(const_cast<RunConfig&>(c))); }};
}

template <typename Ref>
Field flag(std::string section, std::string key, Ref ref) {
  return {section, key,
          [=](RunConfig& c, const std::string& v) { ref(c) = parse_bool(v, section, key); },
          [=](const RunConfig& c) {
            return std::string(ref(const_cast<RunConfig&>(c)) ? "true" : "false");
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(real("motor", "inertia_J", [](RunConfig& c) -> double& { return c.motor.inertia_J; }));
    f.push_back(real("motor", "friction_b", [](RunConfig& c) -> double& { return c.motor.friction_b; }));
    f.push_back(real("motor", "emf_K", [](RunConfig& c) -> double& { return c.motor.emf_K; }));
    f.push_back(real("motor", "inductance_L", [](RunConfig& c) -> double& { return c.motor.inductance_L; }));
    f.push_back(real("motor", "resistance_R", [](RunConfig& c) -> double& { return c.motor.resistance_R; }));

    f.push_back(real("hopper", "half_spike_angle_alpha", [](RunConfig& c) -> double& { return c.hopper.half_spike_angle_alpha; }));
    f.push_back(real("hopper", "spike_length_l", [](RunConfig& c) -> double& { return c.hopper.spike_length_l; }));
    f.push_back(real("hopper", "platform_mass_mp", [](RunConfig& c) -> double& { return c.hopper.platform_mass_mp; }));
    f.push_back(real("hopper", "platform_inertia_Ip", [](RunConfig& c) -> double& { return c.hopper.platform_inertia_Ip; }));
    f.push_back(real("hopper", "flywheel_inertia_If", [](RunConfig& c) -> double& { return c.hopper.flywheel_inertia_If; }));
    f.push_back(real("hopper", "flywheel_mass_mf", [](RunConfig& c) -> double& { return c.hopper.flywheel_mass_mf; }));

    f.push_back(real("environment", "gravity_g", [](RunConfig& c) -> double& { return c.env.gravity_g; }));
    f.push_back(real("environment", "slope_beta", [](RunConfig& c) -> double& { return c.env.slope_beta; }));
    f.push_back(real("environment", "escape_velocity", [](RunConfig& c) -> double& { return c.env.escape_velocity; }));

    f.push_back(real("controller", "overshoot_pct", [](RunConfig& c) -> double& { return c.design.overshoot_pct; }));
    f.push_back(real("controller", "settling_time", [](RunConfig& c) -> double& { return c.design.settling_time; }));
    f.push_back(real("controller", "sample_time", [](RunConfig& c) -> double& { return c.sample_time; }));
    f.push_back(real("controller", "supply_voltage", [](RunConfig& c) -> double& { return c.brake.supply_voltage; }));
    f.push_back(real("controller", "stop_threshold", [](RunConfig& c) -> double& { return c.brake.stop_threshold; }));
    f.push_back({"controller", "dwell_samples",
                 [](RunConfig& c, const std::string& v) {
                   const double d = parse_double(v, "controller", "dwell_samples");
                   if (d != static_cast<int>(d)) bad_value("controller", "dwell_samples", v);
                   c.brake.dwell_samples = static_cast<int>(d);
                 },
                 [](const RunConfig& c) { return std::to_string(c.brake.dwell_samples); }});
    f.push_back({"controller", "reference_timing",
                 [](RunConfig& c, const std::string& v) {
                   if (v == "literal") {
                     c.brake.timing = control::ReferenceTiming::kLiteral;
                   } else if (v == "lag_compensated") {
                     c.brake.timing = control::ReferenceTiming::kLagCompensated;
                   } else {
                     bad_value("controller", "reference_timing", v);
                   }
                 },
                 [](const RunConfig& c) {
                   return std::string(c.brake.timing == control::ReferenceTiming::kLiteral
                                          ? "literal"
                                          : "lag_compensated");
                 }});

    f.push_back(real("planner", "target_angle", [](RunConfig& c) -> double& { return c.plan.target_angle_deg; }));
    f.push_back(real("planner", "spin_fraction", [](RunConfig& c) -> double& { return c.plan.spin_fraction; }));
    f.push_back(real("planner", "safety_factor", [](RunConfig& c) -> double& { return c.plan.safety_factor; }));
    f.push_back(real("planner", "min_brake_time", [](RunConfig& c) -> double& { return c.plan.min_brake_time; }));
    f.push_back(real("planner", "max_hop", [](RunConfig& c) -> double& { return c.mission.max_hop; }));
    f.push_back(real("planner", "tolerance_fraction", [](RunConfig& c) -> double& { return c.tolerance_fraction; }));
    f.push_back(flag("planner", "account_for_brake_floor", [](RunConfig& c) -> bool& { return c.account_for_brake_floor; }));
    f.push_back(flag("planner", "replan_after_each_landing", [](RunConfig& c) -> bool& { return c.mission.replan_after_each_landing; }));

    f.push_back(flag("perturbation", "enabled", [](RunConfig& c) -> bool& { return c.perturbation.enabled; }));
    f.push_back(real("perturbation", "band_split_omega", [](RunConfig& c) -> double& { return c.perturbation.band_split_omega; }));
    f.push_back(real("perturbation", "low_band_omega_lo", [](RunConfig& c) -> double& { return c.perturbation.low_band_omega_lo; }));
    f.push_back(real("perturbation", "low_band_omega_hi", [](RunConfig& c) -> double& { return c.perturbation.low_band_omega_hi; }));
    f.push_back(real("perturbation", "high_band_omega_lo", [](RunConfig& c) -> double& { return c.perturbation.high_band_omega_lo; }));
    f.push_back(real("perturbation", "high_band_omega_hi", [](RunConfig& c) -> double& { return c.perturbation.high_band_omega_hi; }));
    f.push_back(real("perturbation", "delta_t_lo", [](RunConfig& c) -> double& { return c.perturbation.delta_t_lo; }));
    f.push_back(real("perturbation", "delta_t_hi", [](RunConfig& c) -> double& { return c.perturbation.delta_t_hi; }));

    f.push_back({"run", "output_dir",
                 [](RunConfig& c, const std::string& v) { c.output_dir = v; },
                 [](const RunConfig& c) { return c.output_dir; }});
    f.push_back({"run", "seed",
                 [](RunConfig& c, const std::string& v) {
                   try {
                     std::size_t used = 0;
                     c.seed = std::stoull(v, &used);
                     if (used != v.size()) bad_value("run", "seed", v);
                   } catch (const std::logic_error&) {
                     bad_value("run", "seed", v);
                   }
                 },
                 [](const RunConfig& c) { return std::to_string(c.seed); }});
    return f;
  }();
  return table;
}

}  // namespace

void RunConfig::validate() const {
  motor.validate();
  hopper.validate();
  env.validate();
  design.validate();
  plan.validate();
  perturbation.validate();
  if (!(sample_time > 0.0) || !(brake.supply_voltage > 0.0) || !(brake.stop_threshold > 0.0) ||
      brake.dwell_samples < 1) {
    throw Error(ErrorCode::kInvalidParameter, "invalid controller settings");
  }
  if (!(mission.max_hop > 0.0) || !(tolerance_fraction > 0.0)) {
    throw Error(ErrorCode::kInvalidParameter, "invalid planner settings");
  }
}

campaign::RigConfig RunConfig::rig() const { return {motor, design, sample_time, brake}; }

campaign::JumpSettings RunConfig::jump_settings() const {
  campaign::JumpSettings s;
  s.plan = plan;
  s.perturbation = perturbation;
  s.tolerance_fraction = tolerance_fraction;
  s.account_for_brake_floor = account_for_brake_floor;
  return s;
}

RunConfig itokawa_defaults() {
  RunConfig c;
  c.motor = {3.42e-5, 2.20e-5, 47.96e-3, 7.75e-3, 11.36};
  c.hopper = {45.0, 0.071, 1.5, 25e-4, 3.42e-5, 0.076};
  c.env = {77e-6, 0.0, 0.1128};
  c.design = {0.0, 0.1};
  c.sample_time = 0.0005;
  c.perturbation = control::PerturbationModel::bench_defaults();
  c.mission.plan = c.plan;
  return c;
}

RunConfig parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(ErrorCode::kInvalidParameter, fmt::format("config syntax: {}", e.message()));
  }

  RunConfig config = itokawa_defaults();
  for (const auto& [section, entries] : tree) {
    if (entries.empty() && !entries.data().empty()) {
      throw Error(ErrorCode::kInvalidParameter,
                  fmt::format("config key '{}' must live inside a section", section));
    }
    for (const auto& [key, value] : entries) {
      const auto& table = fields();
      const auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) {
        return f.section == section && f.key == key;
      });
      if (it == table.end()) {
        throw Error(ErrorCode::kInvalidParameter,
                    fmt::format("unknown config key [{}] {}", section, key));
      }
      it->set(config, value.data());
    }
  }
  config.mission.plan = config.plan;
  config.validate();
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, fmt::format("cannot open config '{}'", path.string()));
  return parse_config(in);
}

std::string to_ini(const RunConfig& config) {
  std::ostringstream out;
  std::string current;
  for (const Field& f : fields()) {
    if (f.section != current) {
      if (!current.empty()) out << '\n';
      out << '[' << f.section << "]\n";
      current = f.section;
    }
    out << f.key << " = " << f.get(config) << '\n';
  }
  return out.str();
}

}  // namespace hopper::config
