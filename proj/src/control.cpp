#include "bearform/control.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "bearform/error.hpp"

namespace bearform {

void ControlGains::validate_follower() const {
  if (!(kp > 0.0)) throw Error(ErrorCode::InvalidGain, fmt::format("kp = {} must be positive", kp));
  if (!(kd > 1.0)) throw Error(ErrorCode::InvalidGain, fmt::format("kd = {} must exceed 1", kd));
  if (!(n_gain > 0.0)) throw Error(ErrorCode::InvalidGain, fmt::format("n_gain = {} must be positive", n_gain));
  if (!(ko >= 0.0)) throw Error(ErrorCode::InvalidGain, fmt::format("ko = {} must be non-negative", ko));
}

void CollisionParams::validate() const {
  if (!(r >= 0.0)) throw Error(ErrorCode::InvalidArgument, "safety margin r must be non-negative");
  if (!(eps_inner > 0.0 && eps_inner < eps_outer)) {
    throw Error(ErrorCode::InvalidArgument, "need 0 < eps_inner < eps_outer");
  }
}

Vector3 outer_loop_follower(const FollowerMeasurements& meas, const FollowerReference& ref,
                            const ControlGains& gains) {
  if (meas.neighbors.empty() || meas.neighbors.size() != ref.neighbors.size()) {
    throw Error(ErrorCode::NeighborMismatch,
                fmt::format("{} measured vs {} reference neighbors", meas.neighbors.size(),
                            ref.neighbors.size()));
  }
  Vector3 u = ref.u_star;
  for (std::size_t k = 0; k < meas.neighbors.size(); ++k) {
    const auto& m = meas.neighbors[k];
    const auto& r = ref.neighbors[k];
    if (m.neighbor != r.neighbor) {
      throw Error(ErrorCode::NeighborMismatch,
                  fmt::format("slot {}: measured {} vs reference {}", k, m.neighbor, r.neighbor));
    }
    u += -gains.kp * (projector(m.bearing) * r.relative_position) +
         gains.kd * (m.relative_velocity - r.relative_velocity);
  }
  return u;
}

double collision_gamma(double z, const CollisionParams& cp) {
  if (!(z > 0.0)) throw Error(ErrorCode::NonPositiveDistance, fmt::format("barrier distance {} <= 0", z));
  if (z >= cp.eps_outer) return 0.0;
  if (z <= cp.eps_inner) return 1.0 / z;
  const double blend =
      0.5 - 0.5 * std::cos(std::numbers::pi * (z - cp.eps_outer) / (cp.eps_inner - cp.eps_outer));
  return blend / z;
}

double collision_gamma_derivative(double z, const CollisionParams& cp) {
  if (!(z > 0.0)) throw Error(ErrorCode::NonPositiveDistance, fmt::format("barrier distance {} <= 0", z));
  if (z >= cp.eps_outer) return 0.0;
  if (z <= cp.eps_inner) return -1.0 / (z * z);
  const double span = cp.eps_inner - cp.eps_outer;
  const double arg = std::numbers::pi * (z - cp.eps_outer) / span;
  const double blend = 0.5 - 0.5 * std::cos(arg);
  const double blend_rate = 0.5 * std::sin(arg) * std::numbers::pi / span;
  return blend_rate / z - blend / (z * z);
}

Vector3 collision_term(const FollowerMeasurements& meas, const CollisionParams& cp,
                       const ControlGains& gains) {
  Vector3 u = Vector3::Zero();
  for (const auto& m : meas.neighbors) {
    if (!(m.range_margin > 0.0)) {
      throw Error(ErrorCode::SafetyViolated,
                  fmt::format("neighbor {} inside the safety margin (d = {:.4g} m)", m.neighbor, m.range_margin));
    }
    const double weight = gains.ko * collision_gamma(m.range_margin, cp);
    if (weight == 0.0) continue;
    u += (weight * m.bearing.dot(m.relative_velocity)) * m.bearing.vec();
  }
  return u;
}

Vector3 estimate_udot(const Vector3& u_now, const std::optional<Vector3>& u_prev,
                      const Vector3& jerk_star, double dt_ctrl) {
  if (!(dt_ctrl > 0.0)) throw Error(ErrorCode::InvalidArgument, "control period must be positive");
  if (!u_prev) return jerk_star;
  return (u_now - *u_prev) / dt_ctrl;
}

InnerLoopOutput inner_loop(const VirtualAcceleration& va, const RotationMatrix& attitude,
                           const QuadrotorParams& params, const ControlGains& gains,
                           double thrust_guard) {
  const Vector3 thrust_dir = params.gravity * e3() - va.u;
  const double accel_norm = thrust_dir.norm();
  if (!(accel_norm >= thrust_guard)) {
    throw Error(ErrorCode::ThrustSingularity,
                fmt::format("|g e3 - u| = {:.4g} m/s^2 below guard {:.4g}", accel_norm, thrust_guard));
  }
  InnerLoopOutput out;
  out.r3_star = UnitVector3::normalized(thrust_dir);
  out.input.thrust = params.mass * accel_norm;

  const Matrix3 rt = attitude.matrix().transpose();
  const Vector3 r3_body = rt * out.r3_star.vec();
  const Vector3 feedback = gains.n_gain * e3().cross(r3_body);
  const Matrix3 planar = projector(UnitVector3::from_unit(e3()));
  const Vector3 feedforward =
      (params.mass / out.input.thrust) * (planar * (rt * out.r3_star.vec().cross(va.u_dot)));
  out.input.omega = feedback - feedforward;
  return out;
}

VirtualAcceleration leader_control(const QuadrotorState& state, const DesiredState& desired,
                                   const ControlGains& gains) {
  VirtualAcceleration va;
  va.u = desired.u - gains.kp * (state.p - desired.p) - gains.kd * (state.v - desired.v);
  va.u_dot = desired.jerk - gains.kp * (state.v - desired.v) - gains.kd * (va.u - desired.u);
  return va;
}

FollowerCommand follower_control(const FollowerMeasurements& meas, const FollowerReference& ref,
                                 const CollisionParams& cp, const ControlGains& gains,
                                 const std::optional<Vector3>& prev_u, double dt_ctrl, UdotMode mode) {
  FollowerCommand cmd;
  cmd.u_b = outer_loop_follower(meas, ref, gains);
  if (cp.enabled) cmd.u_c = collision_term(meas, cp, gains);
  cmd.va.u = cmd.u_b + cmd.u_c;
  cmd.va.u_dot = mode == UdotMode::Feedforward
                     ? ref.jerk_star
                     : estimate_udot(cmd.va.u, prev_u, ref.jerk_star, dt_ctrl);
  return cmd;
}

}  // namespace bearform
