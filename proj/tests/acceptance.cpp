// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "hopper/ballistics.hpp"
#include "hopper/campaign.hpp"
#include "hopper/cli.hpp"
#include "hopper/config.hpp"
#include "hopper/control.hpp"
#include "hopper/error.hpp"
#include "hopper/hopdyn.hpp"
#include "hopper/motor.hpp"
#include "hopper/planner.hpp"

using namespace hopper;

namespace {

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, std::string note) {
    if (!ok) pass = false;
    notes.push_back((ok ? "" : "!") + std::move(note));
  }
};

double rel(double expected, double actual) {
  return std::abs(actual - expected) / std::abs(expected);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

config::RunConfig defaults() { return config::itokawa_defaults(); }

hopdyn::Environment slope(double beta) {
  hopdyn::Environment env = defaults().env;
  env.slope_beta = beta;
  return env;
}

// 1. Torque sweep at 366.5 rad/s on a 15 degree slope.
Verdict sweep_reproduction() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const auto table = planner::sweep_brake_torque(defaults().hopper, slope(15.0), 366.5);
  const double runtime = seconds_since(t0);
  const auto& best = table.best();
  v.check(rel(102.03, best.distance) <= 0.01, fmt::format("d_max={:.4f}", best.distance));
  v.check(rel(0.03, best.tau) <= 0.10, fmt::format("tau={:.4g}", best.tau));
  v.check(std::abs(best.theta_deg - 45.0) <= 0.5, fmt::format("theta={:.3f}", best.theta_deg));
  v.check(runtime < 1.0, fmt::format("runtime={:.3g}s", runtime));
  return v;
}

// 2. Plan grid on a 20 degree slope against the published rows.
Verdict table3_reproduction() {
  struct Row {
    double d, omega, t_min, dt, ls_cm, theta, t_f;
  };
  const Row rows[] = {
      {5, 81.3, 375.0, 2.78, 2.0, 43.0, 347.0},     {10, 115.0, 531.0, 1.97, 2.8, 43.0, 491.0},
      {30, 198.9, 919.0, 0.97, 4.8, 46.0, 900.0},   {50, 256.7, 1186.0, 0.80, 6.2, 45.0, 1139.0},
      {70, 303.7, 1403.0, 0.69, 7.3, 44.0, 1335.0}, {100, 363.0, 1677.0, 0.56, 8.8, 45.0, 1610.0},
  };
  Verdict v;
  const auto cfg = defaults();
  const auto t0 = std::chrono::steady_clock::now();
  for (const Row& r : rows) {
    const auto p = planner::plan_jump(r.d, cfg.hopper, slope(20.0), cfg.plan);
    const std::string tag = fmt::format("d={}", r.d);
    v.check(rel(r.omega, p.omega_f) <= 0.01, fmt::format("{} w {:+.2f}%", tag, 100 * (p.omega_f / r.omega - 1)));
    v.check(rel(r.ls_cm, 100 * p.launch_speed) <= 0.02,
            fmt::format("{} Ls {:+.2f}%", tag, 100 * (100 * p.launch_speed / r.ls_cm - 1)));
    v.check(std::abs(r.theta - p.launch_angle) <= 2.0, fmt::format("{} th {:.2f}", tag, p.launch_angle));
    v.check(rel(r.t_f, p.fly_time_Tf) <= 0.01, fmt::format("{} Tf {:+.3f}%", tag, 100 * (p.fly_time_Tf / r.t_f - 1)));
    v.check(rel(r.dt, p.delta_t) <= 0.10, fmt::format("{} dt {:+.1f}%", tag, 100 * (p.delta_t / r.dt - 1)));
    v.check(rel(r.t_min, p.speedup_time_Tmin) <= 0.015,
            fmt::format("{} Tmin {:+.2f}%", tag, 100 * (p.speedup_time_Tmin / r.t_min - 1)));
  }
  const double runtime = seconds_since(t0);
  v.check(runtime < 1.0, fmt::format("runtime={:.3g}s", runtime));
  return v;
}

// 3. Replays of measured braking runs.
Verdict measured_replays() {
  struct Run {
    double omega, dt, beta, distance;
  };
  const Run runs[] = {{62.83, 0.06, 0, 3.00},    {104.51, 0.86, 10, 8.29}, {195.3, 0.30, 5, 28.96},
                      {207.97, 1.31, 30, 32.62}, {260.02, 0.79, 20, 51.35}, {400.13, 0.16, -15, 89.59}};
  Verdict v;
  const auto cfg = defaults();
  for (const Run& r : runs) {
    const auto out = ballistics::replay_maneuver(r.omega, r.dt, cfg.hopper, slope(r.beta), r.distance);
    v.check(rel(r.distance, out.realized) <= 0.025,
            fmt::format("{}m->{:.3f}", r.distance, out.realized));
  }
  return v;
}

// 4. 385 m mission.
Verdict mission_385() {
  Verdict v;
  const auto cfg = defaults();
  const campaign::BrakingRig rig(cfg.rig());
  const auto flown = campaign::run_mission(385.0, 5.0, cfg.hopper, cfg.env, rig,
                                           cfg.jump_settings(), cfg.mission, cfg.seed);
  v.check(flown.final_error <= 5.0, fmt::format("simulated: {} hops, {:.2f} m", flown.hops.size(),
                                                flown.final_position));

  const std::vector<double> measured = {102.41, 102.18, 105.67, 73.95};
  const auto mission = planner::plan_mission(385.0, 5.0, cfg.hopper, cfg.env, cfg.mission);
  const auto injected = planner::execute_mission(
      mission, cfg.hopper, cfg.env, cfg.mission, [&](planner::JumpPlan& plan, int i) {
        return static_cast<std::size_t>(i) < measured.size() ? measured[i] : plan.predicted_distance;
      });
  const bool four = injected.hops.size() == 4;
  v.check(four, fmt::format("injected hops={}", injected.hops.size()));
  if (four) {
    const double last = injected.hops.back().plan.target_distance;
    v.check(std::abs(last - 74.7) <= 0.5, fmt::format("last target {:.2f}", last));
  }
  v.check(injected.error_pct <= 0.2, fmt::format("injected total {:.2f} m, err {:.4f}%",
                                                 injected.final_position, injected.error_pct));
  return v;
}

// 5. Escape guard.
Verdict escape_guard() {
  Verdict v;
  const auto cfg = defaults();
  const auto p = planner::plan_jump(100.0, cfg.hopper, cfg.env, cfg.plan);
  v.check(rel(0.088, p.launch_speed) <= 0.02 && p.launch_speed < 0.1128,
          fmt::format("Ls(100m)={:.4f}", p.launch_speed));

  const double safe = planner::max_safe_distance(cfg.hopper, cfg.env, cfg.plan);
  bool rejected = false;
  try {
    planner::plan_jump(safe * 1.01, cfg.hopper, cfg.env, cfg.plan);
  } catch (const EscapeViolation&) {
    rejected = true;
  }
  v.check(rejected, fmt::format("plan beyond {:.2f} m rejected", safe));

  std::ostringstream out, err;
  const char* argv[] = {"hopper", "--out", "acceptance_out", "plan", "--d", "1000", "--beta", "0"};
  const int code = cli::run(8, argv, out, err);
  v.check(code == cli::kExitEscape && err.str().find("max safe distance") != std::string::npos,
          fmt::format("cli exit={}", code));
  return v;
}

std::vector<std::complex<double>> sorted(std::vector<std::complex<double>> z) {
  std::sort(z.begin(), z.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return z;
}

// 6. Controller properties.
Verdict controller_properties() {
  Verdict v;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  int placed = 0;
  while (placed < 1000) {
    motor::LinearStateModel m;
    const double scale = std::pow(10.0, 2.0 * u(rng));
    m.system << u(rng) * scale, u(rng) * scale, u(rng) * scale, u(rng) * scale;
    m.input << u(rng), u(rng);
    Eigen::Matrix2d ctrb;
    ctrb << m.input, m.system * m.input;
    if (std::abs(ctrb.determinant()) < 1e-3 * ctrb.norm() * ctrb.norm()) continue;

    control::PolePair poles;
    const double re = -scale * (0.2 + std::abs(u(rng)));
    if (placed % 2 == 0) {
      const double im = scale * (0.1 + std::abs(u(rng)));
      poles = {std::complex<double>(re, im), std::complex<double>(re, -im)};
    } else {
      poles = {std::complex<double>(re, 0.0), std::complex<double>(re * (1.5 + std::abs(u(rng))), 0.0)};
    }
    const motor::RowVec2 k = control::place_poles(m, poles);
    Eigen::EigenSolver<Eigen::Matrix2d> es(m.system - m.input * k);
    const auto got = sorted({es.eigenvalues()(0), es.eigenvalues()(1)});
    const auto want = sorted({poles[0], poles[1]});
    for (int i = 0; i < 2; ++i) worst = std::max(worst, std::abs(got[i] - want[i]) / std::abs(want[i]));
    ++placed;
  }
  v.check(worst <= 1e-6, fmt::format("placement worst rel {:.2e} over {}", worst, placed));

  const auto cfg = defaults();
  const campaign::BrakingRig rig(cfg.rig());
  const auto& model = rig.discrete_model();
  const auto& gains = rig.design().gains;
  const double r = 100.0;
  motor::Vec2 x = motor::Vec2::Zero();
  for (int k = 0; k < 20000; ++k) {
    const double u_k = -(gains.feedback_K * x)(0) + gains.feedforward_G * r;
    x = model.system * x + model.input * u_k;
  }
  const double tracking = rel(r, (model.output * x)(0));
  v.check(tracking < 1e-3, fmt::format("tracking err {:.2e}", tracking));

  const auto response = rig.brake(256.67, 0.80);
  const double min_omega = *std::min_element(response.omega.begin(), response.omega.end());
  v.check(rel(0.80, response.achieved_delta_t) <= 0.05,
          fmt::format("brake dt {:.4f}s", response.achieved_delta_t));
  v.check(min_omega >= -1.0, fmt::format("min w {:.3f}", min_omega));
  return v;
}

// Independent propagation of x' = A x + B u over `t` with fine RK4 steps.
std::pair<motor::Mat2, motor::Vec2> rk4_propagate(const motor::LinearStateModel& m, double t) {
  const double rho = std::max(m.system.cwiseAbs().rowwise().sum().maxCoeff(), 1e-12);
  const int n = std::max(1000, static_cast<int>(std::ceil(t * rho / 0.005)));
  const double h = t / n;
  auto run = [&](motor::Vec2 x, double u) {
    const auto f = [&](const motor::Vec2& y) -> motor::Vec2 { return m.system * y + m.input * u; };
    for (int i = 0; i < n; ++i) {
      const motor::Vec2 k1 = f(x), k2 = f(x + 0.5 * h * k1), k3 = f(x + 0.5 * h * k2), k4 = f(x + h * k3);
      x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return x;
  };
  motor::Mat2 phi;
  phi.col(0) = run({1.0, 0.0}, 0.0);
  phi.col(1) = run({0.0, 1.0}, 0.0);
  return {phi, run({0.0, 0.0}, 1.0)};
}

// 7. Discretization against fine integration, and the semigroup property.
Verdict discretization_oracle() {
  Verdict v;
  const double ts = 0.0005;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> factor(-1.0, 1.0);
  double worst = 0.0, semigroup = 0.0;
  for (int i = 0; i <= 100; ++i) {
    motor::MotorParams p = defaults().motor;
    if (i > 0) {
      for (double* x : {&p.inertia_J, &p.friction_b, &p.emf_K, &p.inductance_L, &p.resistance_R}) {
        *x *= std::pow(10.0, factor(rng));
      }
    }
    const auto c = motor::build_continuous(p);
    const auto d = motor::discretize(c, ts);
    const auto [phi, gamma] = rk4_propagate(c, ts);
    worst = std::max({worst, (d.system - phi).norm() / phi.norm(),
                      (d.input - gamma).norm() / gamma.norm()});

    const auto d2 = motor::discretize(c, 2 * ts);
    const motor::Mat2 phi2 = d.system * d.system;
    const motor::Vec2 gamma2 = d.system * d.input + d.input;
    semigroup = std::max({semigroup, (d2.system - phi2).norm() / phi2.norm(),
                          (d2.input - gamma2).norm() / gamma2.norm()});
  }
  v.check(worst <= 1e-6, fmt::format("zoh vs rk4 {:.2e}", worst));
  v.check(semigroup <= 1e-8, fmt::format("semigroup {:.2e}", semigroup));
  return v;
}

// 8. Physics invariants.
Verdict physics_invariants() {
  Verdict v;
  const auto cfg = defaults();
  double energy = 0.0, range = 0.0, deflection = 0.0, round_trip = 0.0;
  int cells = 0;
  const std::vector<double> distances(planner::kTableDistances.begin(), planner::kTableDistances.end());
  // Cells beyond the escape guard have no plan to check.
  for (const auto& row : planner::plan_table(cfg.hopper, cfg.env, planner::standard_slopes(), distances, cfg.plan)) {
    if (!row.plan) continue;
    ++cells;
    {
      const auto env = slope(row.slope_beta);
      const double d = row.distance;
      const auto& p = *row.plan;
      const auto flight = ballistics::simulate_flight({p.launch_speed, p.launch_angle}, env);
      const auto& s0 = flight.samples.front();
      const double e0 = 0.5 * (s0.vx * s0.vx + s0.vy * s0.vy) + env.gravity_g * s0.y;
      for (const auto& s : flight.samples) {
        const double e = 0.5 * (s.vx * s.vx + s.vy * s.vy) + env.gravity_g * s.y;
        energy = std::max(energy, std::abs(e - e0) / e0);
      }
      range = std::max(range, rel(hopdyn::hop_distance(flight.launch, env), flight.landing_distance));

      if (p.delta_t > 0.0) {
        const double by_time = hopdyn::launch_angle_for_brake_time(cfg.hopper, env, p.omega_f, p.delta_t);
        const double tau = *hopdyn::brake_torque_from_time(cfg.hopper, p.omega_f, p.delta_t);
        const double by_torque = hopdyn::launch_angle_braked(cfg.hopper, env, p.omega_f, tau);
        deflection = std::max(deflection, std::abs(by_time - by_torque) / by_torque);
      }
      const auto replay = ballistics::replay_maneuver(p.omega_f, p.delta_t, cfg.hopper, env, d);
      round_trip = std::max(round_trip, rel(d, replay.realized));
    }
  }
  v.check(cells >= 70, fmt::format("{} planned cells", cells));
  v.check(energy <= 1e-9, fmt::format("energy {:.1e}", energy));
  v.check(range <= 1e-6, fmt::format("range {:.1e}", range));
  v.check(deflection <= 1e-12, fmt::format("deflection {:.1e}", deflection));
  v.check(round_trip <= 1e-3, fmt::format("round trip {:.1e}", round_trip));
  return v;
}

// 9. Monte-Carlo landing statistics.
Verdict monte_carlo() {
  Verdict v;
  const auto cfg = defaults();
  const campaign::BrakingRig rig(cfg.rig());
  for (double beta : {-15.0, 0.0, 15.0}) {
    for (double d : {30.0, 50.0, 70.0, 100.0}) {
      const auto c = campaign::run_jump_campaign(d, cfg.hopper, slope(beta), rig,
                                                 cfg.jump_settings(), 14, cfg.seed);
      v.check(c.stats.relative_error_pct <= 10.0,
              fmt::format("b{}/{}m {:.1f}%", beta, d, c.stats.relative_error_pct));
    }
  }
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"1 sweep reproduction", sweep_reproduction},
      {"2 table 3 reproduction", table3_reproduction},
      {"3 measured replay consistency", measured_replays},
      {"4 385 m mission", mission_385},
      {"5 escape guard", escape_guard},
      {"6 controller properties", controller_properties},
      {"7 discretization oracle", discretization_oracle},
      {"8 physics invariants", physics_invariants},
      {"9 monte-carlo landing statistics", monte_carlo},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v.check(false, fmt::format("exception: {}", e.what()));
    }
    std::string notes;
    for (const auto& n : v.notes) notes += (notes.empty() ? "" : "; ") + n;
    fmt::print("{} criterion {}: {}\n", v.pass ? "PASS" : "FAIL", name, notes);
    failed += v.pass ? 0 : 1;
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
