#include "hopper/control.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "hopper/error.hpp"

namespace hopper::control {
namespace {

using cplx = std::complex<double>;

struct CharPoly {
  double sum;      // p1 + p2
  double product;  // p1 * p2
};

CharPoly real_char_poly(const PolePair& poles) {
  const cplx sum = poles[0] + poles[1];
  const cplx product = poles[0] * poles[1];
  const double scale = std::max({std::abs(poles[0]), std::abs(poles[1]), 1e-300});
  if (std::abs(sum.imag()) > 1e-9 * scale || std::abs(product.imag()) > 1e-9 * scale * scale) {
    throw Error(ErrorCode::kInvalidParameter,
                "desired poles must be real or a complex-conjugate pair");
  }
  return {sum.real(), product.real()};
}

// Steady state with omega = target under a constant input.
Vec2 steady_state_at(const LinearStateModel& model, double omega) {
  const Mat2 m = Mat2::Identity() - model.system;
  const Vec2 per_volt = m.fullPivLu().solve(model.input);
  if (!per_volt.allFinite() || per_volt(0) == 0.0) {
    throw Error(ErrorCode::kDegenerateDesign, "model has no steady state for a constant input");
  }
  return per_volt * (omega / per_volt(0));
}

struct ClosedLoopRun {
  BrakeResponse response;
  bool stopped = false;
};

ClosedLoopRun run_closed_loop(const LinearStateModel& model, const ControllerGains& gains,
                              double initial_omega, double ramp_duration,
                              const BrakeOptions& opt, long max_samples) {
  const double ts = *model.sample_time;
  ClosedLoopRun run;
  BrakeResponse& r = run.response;
  r.initial_omega = initial_omega;
  r.reference_duration = ramp_duration;

  Vec2 x = initial_omega == 0.0 ? Vec2::Zero() : steady_state_at(model, initial_omega);
  int below = 0;
  long run_start = 0;
  for (long k = 0; k < max_samples; ++k) {
    const double t = static_cast<double>(k) * ts;
    const double ref =
        ramp_duration > 0.0 ? initial_omega * std::max(0.0, 1.0 - t / ramp_duration) : 0.0;
    const double u_raw = -gains.feedback_K.dot(x) + gains.feedforward_G * ref;
    const double u = std::clamp(u_raw, -opt.supply_voltage, opt.supply_voltage);

    r.times.push_back(t);
    r.omega.push_back(x(0));
    r.current.push_back(x(1));
    r.voltage.push_back(u);
    r.reference.push_back(ref);

    if (std::abs(x(0)) < opt.stop_threshold) {
      if (below == 0) run_start = k;
      if (++below >= opt.dwell_samples) {
        r.achieved_delta_t = static_cast<double>(run_start) * ts;
        run.stopped = true;
        return run;
      }
    } else {
      below = 0;
    }
    x = model.system * x + model.input * u;
    if (!x.allFinite()) break;
  }
  return run;
}

struct BenchRun {
  double commanded_omega;
  double realized_omega;
  double commanded_delta_t;
  double realized_delta_t;
};

// Commanded versus measured braking runs on the reference rover's motor.
constexpr BenchRun kBenchRuns[] = {
    {81.16, 62.83, 0.00, 0.06},   {114.88, 104.51, 0.98, 0.86}, {198.76, 195.30, 0.26, 0.30},
    {199.49, 207.97, 1.37, 1.31}, {256.67, 260.02, 0.80, 0.79}, {389.98, 400.13, 0.00, 0.16},
};

}  // namespace

void DesignSpec::validate() const {
  if (!std::isfinite(overshoot_pct) || overshoot_pct < 0.0 || overshoot_pct >= 100.0) {
    throw Error(ErrorCode::kInvalidParameter,
                fmt::format("overshoot must be in [0, 100) % (got {})", overshoot_pct));
  }
  if (!std::isfinite(settling_time) || settling_time <= 0.0) {
    throw Error(ErrorCode::kInvalidParameter,
                fmt::format("settling time must be > 0 (got {})", settling_time));
  }
}

double damping_from_overshoot(double overshoot_pct) {
  if (overshoot_pct <= 0.1) return 1.0;
  const double l = std::log(overshoot_pct / 100.0);
  return -l / std::sqrt(std::numbers::pi * std::numbers::pi + l * l);
}

PolePair poles_from_spec(const DesignSpec& spec) {
  spec.validate();
  const double zeta = damping_from_overshoot(spec.overshoot_pct);
  const double wn = 4.0 / (zeta * spec.settling_time);
  const cplx root = wn * std::sqrt(cplx(zeta * zeta - 1.0, 0.0));
  return {cplx(-zeta * wn) + root, cplx(-zeta * wn) - root};
}

PolePair map_to_discrete(const PolePair& poles, double sample_time) {
  return {std::exp(poles[0] * sample_time), std::exp(poles[1] * sample_time)};
}

RowVec2 place_poles(const LinearStateModel& model, const PolePair& poles) {
  const Mat2& a = model.system;
  const Vec2& b = model.input;
  const Vec2 ab = a * b;

  Mat2 wc;
  wc << b, ab;
  const double scale = b.norm() * ab.norm();
  if (scale == 0.0 || std::abs(wc.determinant()) <= 1e-12 * scale) {
    throw Error(ErrorCode::kUncontrollable, "controllability matrix [B, AB] is singular");
  }

  const CharPoly cp = real_char_poly(poles);
  const Mat2 phi_a = a * a - cp.sum * a + cp.product * Mat2::Identity();
  const RowVec2 last_row = wc.inverse().row(1);
  return last_row * phi_a;
}

RowVec2 ackermann(const LinearStateModel& model, const PolePair& continuous_poles) {
  if (model.is_discrete()) {
    return place_poles(model, map_to_discrete(continuous_poles, *model.sample_time));
  }
  return place_poles(model, continuous_poles);
}

double feedforward_gain(const LinearStateModel& model, const RowVec2& k) {
  const Mat2 bk = model.input * k;
  const Mat2 m = model.is_discrete() ? Mat2(Mat2::Identity() - model.system + bk)
                                     : Mat2(-model.system + bk);
  const double norm = m.cwiseAbs().maxCoeff();
  if (norm == 0.0 || std::abs(m.determinant()) <= 1e-14 * norm * norm) {
    throw Error(ErrorCode::kDegenerateDesign, "closed-loop DC matrix is singular");
  }
  const double dc = model.output * m.inverse() * model.input;
  if (!std::isfinite(dc) || std::abs(dc) < 1e-300) {
    throw Error(ErrorCode::kDegenerateDesign, "closed loop has zero DC gain");
  }
  return 1.0 / dc;
}

PolePair closed_loop_poles(const LinearStateModel& model, const RowVec2& k) {
  return motor::eigenvalues(model.system - model.input * k);
}

ControllerDesign design_controller(const LinearStateModel& model, const DesignSpec& spec) {
  ControllerDesign d;
  d.spec = spec;
  d.continuous_poles = poles_from_spec(spec);
  d.sample_time = model.sample_time;
  d.placed_poles = model.is_discrete() ? map_to_discrete(d.continuous_poles, *model.sample_time)
                                       : d.continuous_poles;
  d.gains.feedback_K = place_poles(model, d.placed_poles);
  d.gains.feedforward_G = feedforward_gain(model, d.gains.feedback_K);
  d.gains.domain = model.is_discrete() ? Domain::kDiscrete : Domain::kContinuous;
  return d;
}

BrakeResponse simulate_brake(const LinearStateModel& model, const ControllerGains& gains,
                             double initial_omega, double target_delta_t,
                             const BrakeOptions& opt) {
  if (!model.is_discrete()) {
    throw Error(ErrorCode::kInvalidParameter, "braking simulation needs a discrete model");
  }
  if (!std::isfinite(initial_omega) || initial_omega < 0.0) {
    throw Error(ErrorCode::kInvalidParameter,
                fmt::format("initial speed must be >= 0 (got {})", initial_omega));
  }
  if (!std::isfinite(target_delta_t) || target_delta_t < 0.0) {
    throw Error(ErrorCode::kInvalidParameter,
                fmt::format("braking time must be >= 0 (got {})", target_delta_t));
  }
  if (!(opt.supply_voltage > 0.0) || !(opt.stop_threshold > 0.0) || opt.dwell_samples < 1) {
    throw Error(ErrorCode::kInvalidParameter, "invalid braking options");
  }

  const double ts = *model.sample_time;
  const double horizon = 10.0 * std::max(target_delta_t, 1.0);
  const auto max_samples = static_cast<long>(std::ceil(horizon / ts)) + 1;

  auto run_with = [&](double ramp) {
    ClosedLoopRun run = run_closed_loop(model, gains, initial_omega, ramp, opt, max_samples);
    if (!run.stopped) {
      throw Error(ErrorCode::kNonConvergence,
                  fmt::format("flywheel did not stop within {:.3g} s from {:.4g} rad/s "
                              "(requested braking time {:.3g} s)",
                              horizon, initial_omega, target_delta_t));
    }
    run.response.target_delta_t = target_delta_t;
    return run.response;
  };

  if (opt.timing == ReferenceTiming::kLiteral || target_delta_t == 0.0 || initial_omega == 0.0) {
    return run_with(target_delta_t);
  }

  // Achieved braking time grows with the ramp length; bisect for the ramp
  // whose closed-loop stop lands on the requested time.
  BrakeResponse lo = run_with(0.0);
  if (lo.achieved_delta_t >= target_delta_t) return lo;
  BrakeResponse hi = run_with(target_delta_t);
  if (hi.achieved_delta_t <= target_delta_t) return hi;

  double lo_ramp = 0.0;
  double hi_ramp = target_delta_t;
  while (hi_ramp - lo_ramp > 0.25 * ts) {
    const double mid = 0.5 * (lo_ramp + hi_ramp);
    BrakeResponse m = run_with(mid);
    if (m.achieved_delta_t < target_delta_t) {
      lo_ramp = mid;
      lo = std::move(m);
    } else {
      hi_ramp = mid;
      hi = std::move(m);
    }
  }
  const double lo_gap = target_delta_t - lo.achieved_delta_t;
  const double hi_gap = hi.achieved_delta_t - target_delta_t;
  return hi_gap <= lo_gap ? hi : lo;
}

double relative_error(double expected, double actual) {
  if (expected == 0.0) {
    throw Error(ErrorCode::kUndefined, "relative error is undefined for a zero expected value");
  }
  return std::abs(expected - actual) / std::abs(expected) * 100.0;
}

double braking_impulse(const BrakeResponse& r, const motor::MotorParams& p) {
  double impulse = 0.0;
  for (std::size_t k = 1; k < r.times.size(); ++k) {
    const double dt = r.times[k] - r.times[k - 1];
    const double prev = p.friction_b * r.omega[k - 1] - p.emf_K * r.current[k - 1];
    const double curr = p.friction_b * r.omega[k] - p.emf_K * r.current[k];
    impulse += 0.5 * dt * (prev + curr);
  }
  return impulse;
}

PerturbationModel PerturbationModel::bench_defaults() {
  PerturbationModel m;
  m.enabled = true;
  m.band_split_omega = 150.0;
  m.low_band_omega_lo = m.high_band_omega_lo = 1e300;
  m.low_band_omega_hi = m.high_band_omega_hi = -1e300;
  m.delta_t_lo = 1e300;
  m.delta_t_hi = -1e300;
  for (const BenchRun& run : kBenchRuns) {
    const double rel = run.realized_omega / run.commanded_omega - 1.0;
    if (run.commanded_omega < m.band_split_omega) {
      m.low_band_omega_lo = std::min(m.low_band_omega_lo, rel);
      m.low_band_omega_hi = std::max(m.low_band_omega_hi, rel);
    } else {
      m.high_band_omega_lo = std::min(m.high_band_omega_lo, rel);
      m.high_band_omega_hi = std::max(m.high_band_omega_hi, rel);
    }
    // Instant-brake demands are limited by the controller itself, which the
    // braking simulation already reproduces.
    if (run.commanded_delta_t > 0.0) {
      const double dev = run.realized_delta_t - run.commanded_delta_t;
      m.delta_t_lo = std::min(m.delta_t_lo, dev);
      m.delta_t_hi = std::max(m.delta_t_hi, dev);
    }
  }
  return m;
}

void PerturbationModel::validate() const {
  const bool ok = std::isfinite(band_split_omega) && low_band_omega_lo <= low_band_omega_hi &&
                  high_band_omega_lo <= high_band_omega_hi && delta_t_lo <= delta_t_hi &&
                  low_band_omega_lo > -1.0 && high_band_omega_lo > -1.0;
  if (!ok) throw Error(ErrorCode::kInvalidParameter, "invalid perturbation ranges");
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

Perturbation draw_perturbation(const PerturbationModel& m, double commanded_omega,
                               std::mt19937_64& rng) {
  if (!m.enabled) return {};
  const bool low = commanded_omega < m.band_split_omega;
  Perturbation p;
  p.omega_scale = 1.0 + (low ? uniform(rng, m.low_band_omega_lo, m.low_band_omega_hi)
                             : uniform(rng, m.high_band_omega_lo, m.high_band_omega_hi));
  p.delta_t_offset = uniform(rng, m.delta_t_lo, m.delta_t_hi);
  return p;
}

}  // namespace hopper::control
