#include "hopper/motor.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "hopper/error.hpp"
#include "hopper/rk4.hpp"

namespace hopper::motor {
namespace {

using cplx = std::complex<double>;

void require_positive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw Error(ErrorCode::kInvalidParameter,
                fmt::format("motor parameter {} must be finite and > 0 (got {})", name, value));
  }
}

bool all_finite(const Mat2& m) { return m.allFinite(); }

// (e^z - 1) / z, accurate near z = 0.
cplx phi1(cplx z) {
  if (std::abs(z) < 0.5) {
    cplx term = 1.0;
    cplx sum = 1.0;
    for (int k = 2; k < 40; ++k) {
      term *= z / static_cast<double>(k);
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return (std::exp(z) - 1.0) / z;
}

// exp and its integral from the 4x4 block matrix [[A, I], [0, 0]].
ExpPair series_expm(const Mat2& a, double t) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m.topLeftCorner<2, 2>() = a * t;
  m.topRightCorner<2, 2>() = Mat2::Identity() * t;

  const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Eigen::Matrix4d scaled = m / std::ldexp(1.0, squarings);

  Eigen::Matrix4d sum = Eigen::Matrix4d::Identity();
  Eigen::Matrix4d term = Eigen::Matrix4d::Identity();
  for (int k = 1; k < 30; ++k) {
    term = term * scaled / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18 * sum.cwiseAbs().maxCoeff()) break;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;

  return {sum.topLeftCorner<2, 2>(), sum.topRightCorner<2, 2>()};
}

}  // namespace

void MotorParams::validate() const {
  require_positive(inertia_J, "inertia_J");
  require_positive(friction_b, "friction_b");
  require_positive(emf_K, "emf_K");
  require_positive(inductance_L, "inductance_L");
  require_positive(resistance_R, "resistance_R");
}

std::array<cplx, 2> eigenvalues(const Mat2& m) {
  const double half_trace = 0.5 * m.trace();
  const double det = m.determinant();
  const cplx root = std::sqrt(cplx(half_trace * half_trace - det, 0.0));
  // Pick the larger-magnitude root first and recover the other from the
  // product to avoid cancellation.
  const cplx big = half_trace >= 0.0 ? half_trace + root : half_trace - root;
  if (std::abs(big) == 0.0) return {cplx(0.0), cplx(0.0)};
  return {big, det / big};
}

bool is_hurwitz(const Mat2& m) {
  const auto ev = eigenvalues(m);
  return ev[0].real() < 0.0 && ev[1].real() < 0.0;
}

double spectral_radius(const Mat2& m) {
  const auto ev = eigenvalues(m);
  return std::max(std::abs(ev[0]), std::abs(ev[1]));
}

std::array<cplx, 2> TransferFunction::poles() const {
  const double a = denominator[0];
  const double b = denominator[1];
  const double c = denominator[2];
  const cplx root = std::sqrt(cplx(b * b - 4.0 * a * c, 0.0));
  const cplx q = -0.5 * (b >= 0.0 ? b + root : b - root);
  return {q / a, c / q};
}

LinearStateModel build_continuous(const MotorParams& p) {
  p.validate();
  LinearStateModel model;
  model.kind = ModelKind::kContinuous;
  model.system << -p.friction_b / p.inertia_J, p.emf_K / p.inertia_J,
      -p.emf_K / p.inductance_L, -p.resistance_R / p.inductance_L;
  model.input << 0.0, 1.0 / p.inductance_L;
  model.output << 1.0, 0.0;
  return model;
}

TransferFunction transfer_function(const MotorParams& p) {
  p.validate();
  // (R + L s)(J s + b) + K^2
  TransferFunction tf;
  tf.numerator = p.emf_K;
  tf.denominator = {p.inductance_L * p.inertia_J,
                    p.inductance_L * p.friction_b + p.resistance_R * p.inertia_J,
                    p.resistance_R * p.friction_b + p.emf_K * p.emf_K};
  return tf;
}

ExpPair expm_with_integral(const Mat2& a, double t) {
  const double trace = a.trace();
  const double discriminant = trace * trace - 4.0 * a.determinant();
  const auto ev = eigenvalues(a);
  // Order so that the smaller-magnitude eigenvalue comes first; it keeps the
  // constant coefficient free of cancellation.
  cplx l1 = ev[0];
  cplx l2 = ev[1];
  if (std::abs(l1) > std::abs(l2)) std::swap(l1, l2);
  const cplx gap = l1 - l2;

  const bool nearly_defective = std::abs(discriminant) <= 1e-12 * trace * trace;
  if (nearly_defective || std::abs(gap) * t < 1e-3) return series_expm(a, t);

  // Sylvester: f(A) = c0 I + c1 A with c1 = f[l1, l2], c0 = f(l1) - c1 l1.
  // Factor out the eigenvalue with the larger real part so phi1 only sees
  // arguments with non-positive real part and cannot overflow.
  const cplx e1 = std::exp(l1 * t);
  const cplx exp_c1 = l1.real() >= l2.real() ? e1 * t * phi1(-gap * t)
                                             : std::exp(l2 * t) * t * phi1(gap * t);
  const cplx exp_c0 = e1 - exp_c1 * l1;

  const cplx g1 = t * phi1(l1 * t);
  const cplx g2 = t * phi1(l2 * t);
  const cplx int_c1 = (g1 - g2) / gap;
  const cplx int_c0 = g1 - int_c1 * l1;

  ExpPair out;
  out.exp = exp_c0.real() * Mat2::Identity() + exp_c1.real() * a;
  out.integral = int_c0.real() * Mat2::Identity() + int_c1.real() * a;
  return out;
}

LinearStateModel discretize(const LinearStateModel& model, double sample_time) {
  if (model.is_discrete()) {
    throw Error(ErrorCode::kInvalidParameter, "discretize expects a continuous model");
  }
  if (!std::isfinite(sample_time) || sample_time <= 0.0) {
    throw Error(ErrorCode::kInvalidParameter,
                fmt::format("sample time must be finite and > 0 (got {})", sample_time));
  }
  if (!all_finite(model.system) || !model.input.allFinite() || !model.output.allFinite()) {
    throw Error(ErrorCode::kNumeric, "continuous model has non-finite entries");
  }

  const ExpPair e = expm_with_integral(model.system, sample_time);

  LinearStateModel out;
  out.kind = ModelKind::kDiscrete;
  out.system = e.exp;
  out.input = e.integral * model.input;
  out.output = model.output;
  out.sample_time = sample_time;
  if (!all_finite(out.system) || !out.input.allFinite()) {
    throw Error(ErrorCode::kNumeric, "discretization produced non-finite entries");
  }
  return out;
}

MotorState step_continuous(const LinearStateModel& model, const MotorState& state,
                           double voltage, double dt) {
  if (model.is_discrete()) {
    throw Error(ErrorCode::kInvalidParameter, "step_continuous expects a continuous model");
  }
  if (!(dt > 0.0)) {
    throw Error(ErrorCode::kInvalidParameter, "step_continuous needs dt > 0");
  }
  const double rho = std::max(spectral_radius(model.system), 1e-12);
  const auto substeps = static_cast<long>(std::max(1.0, std::ceil(dt * rho / 0.05)));
  const double h = dt / static_cast<double>(substeps);

  const Mat2& a = model.system;
  const Vec2 bu = model.input * voltage;
  auto f = [&](double, const Vec2& x) -> Vec2 { return a * x + bu; };

  Vec2 x = state.as_vector();
  for (long i = 0; i < substeps; ++i) x = rk4_step(f, 0.0, x, h);
  return MotorState::from_vector(x);
}

}  // namespace hopper::motor
