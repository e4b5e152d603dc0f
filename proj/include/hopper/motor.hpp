#pragma once

#include <array>
#include <complex>
#include <optional>

#include <Eigen/Core>

namespace hopper::motor {

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;
using RowVec2 = Eigen::RowVector2d;

/// Electrical and mechanical constants of the flywheel motor, SI units.
struct MotorParams {
  double inertia_J = 0.0;      // rotor + flywheel inertia [kg m^2]
  double friction_b = 0.0;     // viscous friction [N m s]
  double emf_K = 0.0;          // back-EMF / torque constant [V/(rad/s)]
  double inductance_L = 0.0;   // winding inductance [H]
  double resistance_R = 0.0;   // winding resistance [Ohm]

  /// Throws Error(kInvalidParameter) unless every value is finite and > 0.
  void validate() const;
};

enum class ModelKind { kContinuous, kDiscrete };

/// Two-state, single-input, single-output linear model. For the flywheel the
/// state is (omega [rad/s], current [A]) and the input is voltage [V].
struct LinearStateModel {
  ModelKind kind = ModelKind::kContinuous;
  Mat2 system = Mat2::Zero();   // A or Phi
  Vec2 input = Vec2::Zero();    // B or Gamma
  RowVec2 output = RowVec2(1.0, 0.0);  // C or H
  std::optional<double> sample_time;   // present iff discrete

  bool is_discrete() const { return kind == ModelKind::kDiscrete; }
};

struct MotorState {
  double omega = 0.0;    // [rad/s]
  double current = 0.0;  // [A]

  Vec2 as_vector() const { return {omega, current}; }
  static MotorState from_vector(const Vec2& x) { return {x(0), x(1)}; }
};

/// omega(s) / V(s) with coefficients in descending powers of s.
struct TransferFunction {
  double numerator = 0.0;
  std::array<double, 3> denominator{};

  double dc_gain() const { return numerator / denominator[2]; }
  std::array<std::complex<double>, 2> poles() const;
};

LinearStateModel build_continuous(const MotorParams& params);

TransferFunction transfer_function(const MotorParams& params);

/// Zero-order-hold equivalent of a continuous model.
LinearStateModel discretize(const LinearStateModel& model, double sample_time);

/// Advances x' = A x + B v over dt with v held constant, using RK4 substeps
/// small enough that the fastest mode is resolved (|lambda| h <= 0.05).
MotorState step_continuous(const LinearStateModel& model, const MotorState& state,
                           double voltage, double dt);

/// Eigenvalues of a 2x2 matrix from its characteristic polynomial.
std::array<std::complex<double>, 2> eigenvalues(const Mat2& m);

/// True when both eigenvalues have strictly negative real part.
bool is_hurwitz(const Mat2& m);

/// Largest eigenvalue modulus.
double spectral_radius(const Mat2& m);

/// exp(A t) and int_0^t exp(A s) ds for a 2x2 A.
struct ExpPair {
  Mat2 exp;
  Mat2 integral;
};

/// Closed form via Sylvester's formula on the eigenvalues; falls back to
/// scaling-and-squaring of the truncated series when the eigenvalues are
/// nearly repeated.
ExpPair expm_with_integral(const Mat2& a, double t);

}  // namespace hopper::motor
