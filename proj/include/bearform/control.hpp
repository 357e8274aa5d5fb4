#pragma once

#include <optional>
#include <vector>

#include "bearform/dynamics.hpp"
#include "bearform/geometry.hpp"
#include "bearform/trajectory.hpp"

namespace bearform {

/// What follower i senses about neighbor j.
struct NeighborMeasurement {
  int neighbor = 0;
  UnitVector3 bearing;                        // g_ij
  Vector3 relative_velocity = Vector3::Zero(); // v_ij = v_j - v_i
  double range_margin = 0.0;                  // d_ij = |p_ij| - r (extra channel for the barrier)
};

/// Everything a follower controller may read. There is no absolute position
/// or absolute velocity here on purpose: followers act on relative data only.
struct FollowerMeasurements {
  RotationMatrix attitude;
  std::vector<NeighborMeasurement> neighbors;
};

struct NeighborReference {
  int neighbor = 0;
  Vector3 relative_position = Vector3::Zero();  // p*_ij
  Vector3 relative_velocity = Vector3::Zero();  // v*_ij
};

struct FollowerReference {
  std::vector<NeighborReference> neighbors;
  Vector3 u_star = Vector3::Zero();
  Vector3 jerk_star = Vector3::Zero();
};

/// For followers kp/kd/ko/n_gain are the formation, barrier and attitude
/// gains. For the leader kp/kd are its position-tracking PD gains.
struct ControlGains {
  double kp = 1.9;
  double kd = 3.0;
  double ko = 0.4;
  double n_gain = 20.0;
  double yaw = 0.0;

  /// Throws InvalidGain unless kp > 0, kd > 1, n_gain > 0, ko >= 0.
  void validate_follower() const;
  bool operator==(const ControlGains&) const = default;
};

/// Barrier geometry. eps_inner < eps_outer; gamma is 1/z inside eps_inner,
/// zero beyond eps_outer and a cosine blend in between.
struct CollisionParams {
  double r = 0.10;
  double eps_inner = 0.3;
  double eps_outer = 0.8;
  bool enabled = true;

  void validate() const;
  bool operator==(const CollisionParams&) const = default;
};

struct VirtualAcceleration {
  Vector3 u = Vector3::Zero();
  Vector3 u_dot = Vector3::Zero();
};

enum class UdotMode {
  BackwardDifference,  // (u_k - u_{k-1}) / dt, jerk* on the first tick
  Feedforward,         // jerk* only
};

/// Bearing formation law:
///   u_b = sum_j [ -kp P(g_ij) p*_ij + kd (v_ij - v*_ij) ] + u*.
/// Throws NeighborMismatch if the measured and reference neighbor lists differ.
Vector3 outer_loop_follower(const FollowerMeasurements& meas, const FollowerReference& ref,
                            const ControlGains& gains);

/// Barrier weight. Throws NonPositiveDistance for z <= 0.
double collision_gamma(double z, const CollisionParams& cp);

/// Derivative of collision_gamma with respect to z.
double collision_gamma_derivative(double z, const CollisionParams& cp);

/// u_c = sum_j ko gamma(d_ij) g_ij g_ij^T v_ij. Throws SafetyViolated if any
/// d_ij <= 0.
Vector3 collision_term(const FollowerMeasurements& meas, const CollisionParams& cp,
                       const ControlGains& gains);

/// Backward difference of u; returns jerk_star when there is no history.
Vector3 estimate_udot(const Vector3& u_now, const std::optional<Vector3>& u_prev,
                      const Vector3& jerk_star, double dt_ctrl);

inline constexpr double kDefaultThrustGuard = 0.5;

struct InnerLoopOutput {
  ControlInput input;
  UnitVector3 r3_star;
};

/// Thrust and angular-velocity command realising the virtual acceleration:
///   T = m |g e3 - u|,  r3* = (g e3 - u) / |g e3 - u|,
///   Omega = n [e3]x R^T r3* - (m/T) P(e3) R^T [r3*]x u_dot.
/// Throws ThrustSingularity if |g e3 - u| < thrust_guard.
InnerLoopOutput inner_loop(const VirtualAcceleration& va, const RotationMatrix& attitude,
                           const QuadrotorParams& params, const ControlGains& gains,
                           double thrust_guard = kDefaultThrustGuard);

/// Leader PD tracking on its own global state:
///   u = u* - kp (p - p*) - kd (v - v*),  u_dot = jerk* - kp (v - v*) - kd (u - u*).
VirtualAcceleration leader_control(const QuadrotorState& state, const DesiredState& desired,
                                   const ControlGains& gains);

struct FollowerCommand {
  VirtualAcceleration va;
  Vector3 u_b = Vector3::Zero();
  Vector3 u_c = Vector3::Zero();
};

/// The only follower controller entry point: u = u_b + u_c with u_dot from
/// estimate_udot (or jerk* in Feedforward mode).
FollowerCommand follower_control(const FollowerMeasurements& meas, const FollowerReference& ref,
                                 const CollisionParams& cp, const ControlGains& gains,
                                 const std::optional<Vector3>& prev_u, double dt_ctrl,
                                 UdotMode mode = UdotMode::BackwardDifference);

}  // namespace bearform
