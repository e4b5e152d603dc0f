#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "hopper/motor.hpp"

namespace hopper::control {

using motor::LinearStateModel;
using motor::Mat2;
using motor::RowVec2;
using motor::Vec2;

using PolePair = std::array<std::complex<double>, 2>;

/// Step-response targets used to choose the closed-loop poles.
struct DesignSpec {
  double overshoot_pct = 0.0;  // [%], in [0, 100)
  double settling_time = 0.1;  // [s], 2% band

  void validate() const;
};

enum class Domain { kContinuous, kDiscrete };

/// u = -K x + G r
struct ControllerGains {
  RowVec2 feedback_K = RowVec2::Zero();
  double feedforward_G = 0.0;
  Domain domain = Domain::kDiscrete;
};

struct ControllerDesign {
  DesignSpec spec;
  PolePair continuous_poles;
  PolePair placed_poles;  // in the model's own domain (s or z)
  ControllerGains gains;
  std::optional<double> sample_time;
};

/// Damping ratio of a second-order system with the given percent overshoot.
/// Overshoots at or below 0.1% are treated as critically damped.
double damping_from_overshoot(double overshoot_pct);

/// Dominant second-order poles: zeta from overshoot, w_n = 4 / (zeta * St).
PolePair poles_from_spec(const DesignSpec& spec);

/// z = exp(s T) for each pole.
PolePair map_to_discrete(const PolePair& continuous_poles, double sample_time);

/// Ackermann's formula with poles given in the model's domain.
/// Throws Error(kUncontrollable) when [B, AB] is singular.
RowVec2 place_poles(const LinearStateModel& model, const PolePair& poles);

/// Ackermann's formula with continuous poles; discrete models map the poles
/// through z = exp(s T) first.
RowVec2 ackermann(const LinearStateModel& model, const PolePair& continuous_poles);

/// Reference gain giving unit closed-loop DC gain from r to y.
/// Throws Error(kDegenerateDesign) when the inverted quantities are singular.
double feedforward_gain(const LinearStateModel& model, const RowVec2& feedback_K);

/// Eigenvalues of A - B K (or Phi - Gamma K).
PolePair closed_loop_poles(const LinearStateModel& model, const RowVec2& feedback_K);

ControllerDesign design_controller(const LinearStateModel& model, const DesignSpec& spec);

// ---------------------------------------------------------------------------
// Braking by voltage inversion

/// How the ramp reference is timed relative to the requested braking time.
enum class ReferenceTiming {
  /// Ramp reaches zero exactly at the requested braking time.
  kLiteral,
  /// Ramp is shortened so that the closed-loop speed settles below the stop
  /// threshold at the requested braking time (compensates tracking lag).
  kLagCompensated,
};

struct BrakeOptions {
  double supply_voltage = 24.0;  // [V]
  double stop_threshold = 1.0;   // [rad/s]
  int dwell_samples = 50;
  ReferenceTiming timing = ReferenceTiming::kLagCompensated;
};

struct BrakeResponse {
  std::vector<double> times;      // [s], uniform at the controller period
  std::vector<double> omega;      // [rad/s]
  std::vector<double> current;    // [A]
  std::vector<double> voltage;    // [V], saturated command
  std::vector<double> reference;  // [rad/s]
  double initial_omega = 0.0;
  double target_delta_t = 0.0;
  double reference_duration = 0.0;  // length of the ramp actually commanded
  double achieved_delta_t = 0.0;

  double final_omega() const { return omega.empty() ? 0.0 : omega.back(); }
};

/// Closed-loop braking from a steady spin at `initial_omega` toward zero.
/// The reference ramps linearly to zero (a step when the ramp length is 0),
/// the command is clipped to +/- supply_voltage, and the run ends once
/// |omega| stays below the stop threshold for `dwell_samples` samples.
/// Throws Error(kNonConvergence) if that does not happen within
/// 10 * max(target_delta_t, 1 s).
BrakeResponse simulate_brake(const LinearStateModel& model, const ControllerGains& gains,
                             double initial_omega, double target_delta_t,
                             const BrakeOptions& options = {});

/// |expected - actual| / |expected| * 100. Throws Error(kUndefined) when
/// expected is zero.
double relative_error(double expected, double actual);

/// Time integral of the net decelerating torque (K i - b omega, sign flipped)
/// over the response, trapezoidal rule [N m s].
double braking_impulse(const BrakeResponse& response, const motor::MotorParams& params);

// ---------------------------------------------------------------------------
// Run-to-run variation for Monte-Carlo replays

/// Uniform deviations between commanded and realized braking runs. The flywheel
/// speed deviation is relative and depends on the commanded speed band; the
/// braking-time deviation is additive.
struct PerturbationModel {
  bool enabled = false;
  double band_split_omega = 150.0;  // [rad/s]
  double low_band_omega_lo = 0.0;   // relative, below the split
  double low_band_omega_hi = 0.0;
  double high_band_omega_lo = 0.0;  // relative, at or above the split
  double high_band_omega_hi = 0.0;
  double delta_t_lo = 0.0;          // [s]
  double delta_t_hi = 0.0;

  /// Ranges spanned by the hardware braking runs of the reference rover.
  static PerturbationModel bench_defaults();
  void validate() const;
};

struct Perturbation {
  double omega_scale = 1.0;
  double delta_t_offset = 0.0;
};

/// Portable uniform draw in [lo, hi) from the top 53 bits of the engine.
double uniform(std::mt19937_64& rng, double lo, double hi);

Perturbation draw_perturbation(const PerturbationModel& model, double commanded_omega,
                               std::mt19937_64& rng);

}  // namespace hopper::control
