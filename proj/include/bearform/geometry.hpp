#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace bearform {

using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;

/// Minimum separation below which a bearing is considered undefined [m].
inline constexpr double kDefaultMinSeparation = 1e-6;

inline Vector3 e1() { return Vector3::UnitX(); }
inline Vector3 e2() { return Vector3::UnitY(); }
inline Vector3 e3() { return Vector3::UnitZ(); }

/// A direction on the 2-sphere. Construction either normalizes or verifies
/// unit length; arithmetic goes through vec() and yields plain Vector3.
class UnitVector3 {
 public:
  UnitVector3() : v_(Vector3::UnitZ()) {}

  /// Normalizes v; throws InvalidArgument for a (near) zero vector.
  static UnitVector3 normalized(const Vector3& v);
  /// Accepts v as-is if | |v| - 1 | <= 1e-12, otherwise throws.
  static UnitVector3 from_unit(const Vector3& v);

  const Vector3& vec() const { return v_; }
  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }
  double dot(const Vector3& w) const { return v_.dot(w); }

  UnitVector3 operator-() const {
    UnitVector3 r;
    r.v_ = -v_;
    return r;
  }

 private:
  Vector3 v_;
};

/// Element of SO(3). The checked constructor enforces orthogonality and unit
/// determinant to 1e-9.
class RotationMatrix {
 public:
  RotationMatrix() : m_(Matrix3::Identity()) {}
  explicit RotationMatrix(const Matrix3& m);

  /// Skips the SO(3) check; for products of already valid rotations.
  static RotationMatrix unchecked(const Matrix3& m) {
    RotationMatrix r;
    r.m_ = m;
    return r;
  }

  const Matrix3& matrix() const { return m_; }
  Vector3 column(int c) const { return m_.col(c); }
  RotationMatrix transpose() const { return unchecked(m_.transpose()); }

  Vector3 operator*(const Vector3& v) const { return m_ * v; }
  RotationMatrix operator*(const RotationMatrix& o) const { return unchecked(m_ * o.m_); }

  /// ||R^T R - I||_F
  double orthogonality_error() const;

 private:
  Matrix3 m_;
};

/// Cross-product matrix: skew(v) * w == v.cross(w).
Matrix3 skew(const Vector3& v);

/// Orthogonal projector onto the plane normal to y: I - y y^T.
Matrix3 projector(const UnitVector3& y);

/// Unit vector from p_i toward p_j. Throws CoincidentAgents when the points
/// are closer than min_separation.
UnitVector3 bearing(const Vector3& p_i, const Vector3& p_j,
                    double min_separation = kDefaultMinSeparation);

/// Right-handed rotation about the inertial y-axis:
/// ((c, 0, s), (0, 1, 0), (-s, 0, c)).
RotationMatrix rot_y(double theta);

/// exp(skew(omega) * dt) in Rodrigues form; identity when |omega| dt < 1e-12.
RotationMatrix so3_exp(const Vector3& omega, double dt);

/// Attitude whose third column is r3_star and whose first column is the
/// heading (cos yaw, sin yaw, 0) projected onto the plane normal to r3_star.
/// Throws DegenerateYaw when the heading is parallel to r3_star.
RotationMatrix attitude_from_thrust_dir(const UnitVector3& r3_star, double yaw);

/// Z-Y-X intrinsic Euler angles: R = Rz(yaw) Ry(pitch) Rx(roll).
RotationMatrix from_roll_pitch_yaw(double roll, double pitch, double yaw);

/// Smallest eigenvalue of a symmetric 3x3 matrix.
double min_symmetric_eigenvalue(const Matrix3& m);

bool all_finite(const Vector3& v);
bool all_finite(const Matrix3& m);

}  // namespace bearform
