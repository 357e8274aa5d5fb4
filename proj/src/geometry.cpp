#include "bearform/geometry.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>
#include <fmt/format.h>

#include "bearform/error.hpp"

namespace bearform {

UnitVector3 UnitVector3::normalized(const Vector3& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::InvalidArgument, "cannot normalize a zero or non-finite vector");
  }
  UnitVector3 r;
  r.v_ = v / n;
  return r;
}

UnitVector3 UnitVector3::from_unit(const Vector3& v) {
  if (!(std::abs(v.norm() - 1.0) <= 1e-12)) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("vector norm {:.17g} is not unit", v.norm()));
  }
  UnitVector3 r;
  r.v_ = v;
  return r;
}

RotationMatrix::RotationMatrix(const Matrix3& m) : m_(m) {
  if (!all_finite(m) || orthogonality_error() > 1e-9 || std::abs(m.determinant() - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "matrix is not a rotation");
  }
}

double RotationMatrix::orthogonality_error() const {
  return (m_.transpose() * m_ - Matrix3::Identity()).norm();
}

Matrix3 skew(const Vector3& v) {
  Matrix3 s;
  s << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return s;
}

Matrix3 projector(const UnitVector3& y) {
  return Matrix3::Identity() - y.vec() * y.vec().transpose();
}

UnitVector3 bearing(const Vector3& p_i, const Vector3& p_j, double min_separation) {
  const Vector3 rel = p_j - p_i;
  const double dist = rel.norm();
  if (!(dist >= min_separation)) {
    throw Error(ErrorCode::CoincidentAgents,
                fmt::format("separation {:.3e} m is below {:.3e} m", dist, min_separation));
  }
  return UnitVector3::normalized(rel);
}

RotationMatrix rot_y(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Matrix3 m;
  m << c, 0.0, s,
       0.0, 1.0, 0.0,
       -s, 0.0, c;
  return RotationMatrix::unchecked(m);
}

RotationMatrix so3_exp(const Vector3& omega, double dt) {
  const double rate = omega.norm();
  const double angle = rate * dt;
  if (angle < 1e-12) return RotationMatrix{};
  const Matrix3 k = skew(omega / rate);
  return RotationMatrix::unchecked(Matrix3::Identity() + std::sin(angle) * k +
                                   (1.0 - std::cos(angle)) * (k * k));
}

RotationMatrix attitude_from_thrust_dir(const UnitVector3& r3_star, double yaw) {
  const Vector3 heading(std::cos(yaw), std::sin(yaw), 0.0);
  const double along = r3_star.dot(heading);
  if (!(std::abs(along) < 1.0 - 1e-9)) {
    throw Error(ErrorCode::DegenerateYaw, "heading is parallel to the thrust direction");
  }
  const Vector3 c1 = (heading - along * r3_star.vec()).normalized();
  const Vector3 c2 = r3_star.vec().cross(c1);
  Matrix3 m;
  m.col(0) = c1;
  m.col(1) = c2;
  m.col(2) = r3_star.vec();
  return RotationMatrix::unchecked(m);
}

RotationMatrix from_roll_pitch_yaw(double roll, double pitch, double yaw) {
  const Eigen::AngleAxisd rz(yaw, Vector3::UnitZ());
  const Eigen::AngleAxisd ry(pitch, Vector3::UnitY());
  const Eigen::AngleAxisd rx(roll, Vector3::UnitX());
  return RotationMatrix::unchecked((rz * ry * rx).toRotationMatrix());
}

double min_symmetric_eigenvalue(const Matrix3& m) {
  Eigen::SelfAdjointEigenSolver<Matrix3> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

bool all_finite(const Vector3& v) { return v.allFinite(); }
bool all_finite(const Matrix3& m) { return m.allFinite(); }

}  // namespace bearform
