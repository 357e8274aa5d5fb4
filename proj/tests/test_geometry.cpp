#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bearform/error.hpp"
#include "bearform/geometry.hpp"
#include "support.hpp"

using namespace bearform;
using bearform::testing::Gen;
using bearform::testing::max_abs;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Skew, CrossProductIdentities) {
  EXPECT_TRUE((skew(e3()) * e1()).isApprox(e2()));
  const Vector3 v(0.3, -1.2, 2.5);
  EXPECT_LT((skew(v) * v).norm(), 1e-15);
}

TEST(Skew, ExpandedByHand) {
  Matrix3 expected;
  expected << 0, -3, 2,
              3, 0, -1,
             -2, 1, 0;
  EXPECT_EQ(skew(Vector3(1, 2, 3)), expected);
}

TEST(Projector, AxisCases) {
  EXPECT_LT(projector(UnitVector3::normalized(e3())).operator*(e3()).norm(), 1e-15);
  EXPECT_EQ(projector(UnitVector3::normalized(e1())), Vector3(0, 1, 1).asDiagonal().toDenseMatrix());
}

TEST(Projector, DiagonalDirection) {
  const auto y = UnitVector3::normalized(Vector3(1, 1, 0));
  EXPECT_TRUE((projector(y) * e1()).isApprox(Vector3(0.5, -0.5, 0.0), 1e-15));
}

TEST(Projector, RandomUnitVectorsAreOrthogonalProjections) {
  Gen gen(11);
  for (int k = 0; k < 1000; ++k) {
    const auto y = gen.unit();
    const Matrix3 p = projector(y);
    EXPECT_LT(max_abs(p - p.transpose()), 1e-12);
    EXPECT_LT(max_abs(p * p - p), 1e-12);
    EXPECT_LT((p * y.vec()).norm(), 1e-12);
    EXPECT_LT(max_abs(p + skew(y.vec()) * skew(y.vec())), 1e-12);
  }
}

TEST(Bearing, AxisAndDiagonal) {
  EXPECT_EQ(bearing(Vector3::Zero(), Vector3(2, 0, 0)).vec(), e1());
  EXPECT_TRUE(bearing(Vector3::Zero(), Vector3(1, 1, 0)).vec().isApprox(Vector3(1, 1, 0) / std::sqrt(2.0), 1e-15));
}

TEST(Bearing, CoincidentAgentsRejected) {
  try {
    bearing(Vector3(1, 1, 1), Vector3(1, 1, 1));
    FAIL() << "expected CoincidentAgents";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CoincidentAgents);
  }
  EXPECT_THROW(bearing(Vector3::Zero(), Vector3(1e-7, 0, 0)), Error);
  EXPECT_NO_THROW(bearing(Vector3::Zero(), Vector3(2e-6, 0, 0)));
}

TEST(Bearing, Antisymmetric) {
  Gen gen(12);
  for (int k = 0; k < 1000; ++k) {
    const Vector3 a = gen.vector(5.0);
    const Vector3 b = gen.vector(5.0);
    EXPECT_TRUE(bearing(a, b).vec().isApprox(-bearing(b, a).vec(), 1e-15));
    EXPECT_NEAR(bearing(a, b).vec().norm(), 1.0, 1e-15);
  }
}

TEST(RotY, ConventionPinned) {
  EXPECT_EQ(rot_y(0.0).matrix(), Matrix3::Identity());
  EXPECT_LT((rot_y(kPi) * e3() + e3()).norm(), 1e-12);
  // Right-handed: a quarter turn about y carries z onto x.
  EXPECT_LT((rot_y(kPi / 2) * e3() - e1()).norm(), 1e-15);
  const double th = 0.7;
  Matrix3 expected;
  expected << std::cos(th), 0, std::sin(th),
              0, 1, 0,
             -std::sin(th), 0, std::cos(th);
  EXPECT_LT(max_abs(rot_y(th).matrix() - expected), 1e-16);
}

TEST(So3Exp, ZeroRateIsIdentity) {
  EXPECT_EQ(so3_exp(Vector3::Zero(), 3.0).matrix(), Matrix3::Identity());
  EXPECT_EQ(so3_exp(Vector3(1, 2, 3), 0.0).matrix(), Matrix3::Identity());
}

TEST(So3Exp, HalfTurnAboutZ) {
  const Matrix3 r = so3_exp(Vector3(0, 0, kPi), 1.0).matrix();
  Matrix3 expected;
  expected << -1, 0, 0,
               0, -1, 0,
               0, 0, 1;
  EXPECT_LT(max_abs(r - expected), 1e-15);
}

TEST(So3Exp, StaysOnSO3UpToTenRadians) {
  Gen gen(13);
  for (int k = 0; k < 1000; ++k) {
    const Vector3 w = gen.unit().vec() * gen.uniform(0.0, 10.0);
    const RotationMatrix r = so3_exp(w, 1.0);
    EXPECT_LT(r.orthogonality_error(), 1e-12);
    EXPECT_NEAR(r.matrix().determinant(), 1.0, 1e-12);
  }
}

TEST(So3Exp, MatchesSeriesForSmallAngles) {
  const Vector3 w(1e-4, -2e-4, 3e-4);
  const Matrix3 k = skew(w);
  const Matrix3 series = Matrix3::Identity() + k + k * k / 2.0 + k * k * k / 6.0;
  EXPECT_LT(max_abs(so3_exp(w, 1.0).matrix() - series), 1e-15);
}

TEST(AttitudeFromThrust, HoverAndYaw) {
  const auto up = UnitVector3::normalized(e3());
  EXPECT_LT(max_abs(attitude_from_thrust_dir(up, 0.0).matrix() - Matrix3::Identity()), 1e-15);
  const Matrix3 r = attitude_from_thrust_dir(up, kPi / 2).matrix();
  EXPECT_LT((r.col(0) - e2()).norm(), 1e-15);
  EXPECT_LT((r.col(1) + e1()).norm(), 1e-15);
  EXPECT_LT((r.col(2) - e3()).norm(), 1e-15);
}

TEST(AttitudeFromThrust, ReproducesThrustDirection) {
  Gen gen(14);
  for (int k = 0; k < 1000; ++k) {
    auto r3 = gen.unit();
    const double yaw = gen.uniform(-kPi, kPi);
    const Vector3 heading(std::cos(yaw), std::sin(yaw), 0.0);
    if (std::abs(r3.dot(heading)) > 0.99) continue;
    const RotationMatrix r = attitude_from_thrust_dir(r3, yaw);
    EXPECT_LT(r.orthogonality_error(), 1e-12);
    EXPECT_NEAR(r.matrix().determinant(), 1.0, 1e-12);
    EXPECT_LT((r.column(2) - r3.vec()).norm(), 1e-12);
  }
}

TEST(AttitudeFromThrust, HeadingAlongThrustIsDegenerate) {
  try {
    attitude_from_thrust_dir(UnitVector3::normalized(e1()), 0.0);
    FAIL() << "expected DegenerateYaw";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateYaw);
  }
}

TEST(RollPitchYaw, ZYXComposition) {
  const double roll = 0.1, pitch = -0.2, yaw = 0.3;
  const Matrix3 rz = so3_exp(yaw * e3(), 1.0).matrix();
  const Matrix3 ry = so3_exp(pitch * e2(), 1.0).matrix();
  const Matrix3 rx = so3_exp(roll * e1(), 1.0).matrix();
  EXPECT_LT(max_abs(from_roll_pitch_yaw(roll, pitch, yaw).matrix() - rz * ry * rx), 1e-15);
}

TEST(RotationMatrix, RejectsNonOrthogonal) {
  Matrix3 m = Matrix3::Identity();
  m(0, 1) = 1e-3;
  EXPECT_THROW(RotationMatrix{m}, Error);
  Matrix3 reflection = Matrix3::Identity();
  reflection(2, 2) = -1.0;
  EXPECT_THROW(RotationMatrix{reflection}, Error);
}

TEST(UnitVector, Construction) {
  EXPECT_THROW(UnitVector3::normalized(Vector3::Zero()), Error);
  EXPECT_THROW(UnitVector3::from_unit(Vector3(1.0, 1e-5, 0.0)), Error);
  EXPECT_NO_THROW(UnitVector3::from_unit(e2()));
}

TEST(MinEigenvalue, AgreesWithCharacteristicPolynomial) {
  Gen gen(15);
  for (int k = 0; k < 1000; ++k) {
    Matrix3 a = Matrix3::Zero();
    const int terms = gen.integer(1, 4);
    for (int j = 0; j < terms; ++j) a += gen.uniform(0.0, 2.0) * projector(gen.unit());
    EXPECT_NEAR(min_symmetric_eigenvalue(a), bearform::testing::char_poly_min_eigenvalue(a), 1e-10);
  }
}
