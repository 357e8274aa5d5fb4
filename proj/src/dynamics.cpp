#include "bearform/dynamics.hpp"

#include <cmath>

#include <fmt/format.h>

#include "bearform/error.hpp"

namespace bearform {
namespace {

void check_step_args(const ControlInput& input, double dt) {
  if (!(dt > 0.0 && dt <= kMaxPhysicsStep)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("physics step {} outside (0, {}]", dt, kMaxPhysicsStep));
  }
  if (!(input.thrust >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("thrust {} must be non-negative", input.thrust));
  }
}

void check_finite(const QuadrotorState& s) {
  if (!all_finite(s.p) || !all_finite(s.v) || !all_finite(s.R.matrix())) {
    throw Error(ErrorCode::NonFiniteState, "state became non-finite");
  }
}

Matrix3 gram_schmidt(const Matrix3& m) {
  Matrix3 out;
  const Vector3 c0 = m.col(0).normalized();
  const Vector3 c1 = (m.col(1) - c0.dot(m.col(1)) * c0).normalized();
  out.col(0) = c0;
  out.col(1) = c1;
  out.col(2) = c0.cross(c1);
  return out;
}

}  // namespace

void QuadrotorParams::validate() const {
  if (!(mass > 0.0)) throw Error(ErrorCode::InvalidArgument, "mass must be positive");
  if (!(gravity > 0.0)) throw Error(ErrorCode::InvalidArgument, "gravity must be positive");
}

QuadrotorState step(const QuadrotorState& state, const ControlInput& input,
                    const QuadrotorParams& params, double dt) {
  check_step_args(input, dt);
  const double specific_thrust = input.thrust / params.mass;
  const Vector3 gravity = params.gravity * e3();
  auto accel = [&](double tau) -> Vector3 {
    const Vector3 r3 = state.R * so3_exp(input.omega, tau).column(2);
    return -specific_thrust * r3 + gravity;
  };

  const Vector3 a0 = accel(0.0);
  const Vector3 a_mid = accel(0.5 * dt);
  const Vector3 a1 = accel(dt);

  // RK4 on (p, v) with v' = a(t); stages 2 and 3 share the midpoint force.
  const Vector3 k1p = state.v;
  const Vector3 k2p = state.v + 0.5 * dt * a0;
  const Vector3 k3p = state.v + 0.5 * dt * a_mid;
  const Vector3 k4p = state.v + dt * a_mid;

  QuadrotorState next;
  next.v = state.v + dt / 6.0 * (a0 + 4.0 * a_mid + a1);
  next.p = state.p + dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
  next.R = state.R * so3_exp(input.omega, dt);
  check_finite(next);
  return next;
}

QuadrotorState reference_step(const QuadrotorState& state, const ControlInput& input,
                              const QuadrotorParams& params, double dt, int substeps) {
  check_step_args(input, dt);
  if (substeps < 1000) throw Error(ErrorCode::InvalidArgument, "reference_step needs >= 1000 substeps");
  const double h = dt / substeps;
  const double specific_thrust = input.thrust / params.mass;
  const Vector3 gravity = params.gravity * e3();
  const Matrix3 increment = Matrix3::Identity() + h * skew(input.omega);
  Vector3 p = state.p;
  Vector3 v = state.v;
  Matrix3 R = state.R.matrix();
  for (int k = 0; k < substeps; ++k) {
    const Vector3 a = -specific_thrust * R.col(2) + gravity;
    p += h * v + 0.5 * h * h * a;
    v += h * a;
    R = gram_schmidt(R * increment);
  }
  QuadrotorState next{p, v, RotationMatrix::unchecked(R)};
  check_finite(next);
  return next;
}

QuadrotorState double_integrator_step(const QuadrotorState& state, const Vector3& accel, double dt) {
  QuadrotorState next = state;
  next.p = state.p + dt * state.v + (0.5 * dt * dt) * accel;
  next.v = state.v + dt * accel;
  check_finite(next);
  return next;
}

}  // namespace bearform
