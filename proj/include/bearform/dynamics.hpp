#pragma once

#include "bearform/geometry.hpp"

namespace bearform {

/// Position and velocity in the NED inertial frame plus body attitude.
struct QuadrotorState {
  Vector3 p = Vector3::Zero();
  Vector3 v = Vector3::Zero();
  RotationMatrix R;
};

struct QuadrotorParams {
  double mass = 1.0;      // [kg]
  double gravity = 9.81;  // [m/s^2]

  void validate() const;
};

/// Plant input: total thrust magnitude and body angular velocity.
struct ControlInput {
  double thrust = 0.0;                 // [N], >= 0
  Vector3 omega = Vector3::Zero();     // [rad/s], body frame
};

inline constexpr double kMaxPhysicsStep = 0.01;

/// One zero-order-hold step of  p' = v,  m v' = -T R e3 + m g e3,  R' = R [w]x.
/// Attitude is propagated exactly; translation by RK4 with the specific force
/// evaluated on the exactly rotated attitude at each stage time.
/// Throws InvalidArgument for dt outside (0, 0.01] or negative thrust, and
/// NonFiniteState if the result is not finite.
QuadrotorState step(const QuadrotorState& state, const ControlInput& input,
                    const QuadrotorParams& params, double dt);

/// Brute-force oracle: explicit Euler on dt/substeps with Gram-Schmidt
/// re-orthonormalization of R after every substep. substeps >= 1000.
QuadrotorState reference_step(const QuadrotorState& state, const ControlInput& input,
                              const QuadrotorParams& params, double dt, int substeps);

/// Idealized plant v' = accel held over dt (exact for constant accel).
/// Attitude is left untouched.
QuadrotorState double_integrator_step(const QuadrotorState& state, const Vector3& accel, double dt);

}  // namespace bearform
