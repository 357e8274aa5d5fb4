#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "bearform/geometry.hpp"

namespace bearform::testing {

/// Fixed-seed source for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(eng_); }

  Vector3 vector(double scale = 1.0) {
    return {uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale)};
  }

  UnitVector3 unit() {
    std::normal_distribution<double> n;
    Vector3 v;
    do {
      v = {n(eng_), n(eng_), n(eng_)};
    } while (v.norm() < 1e-3);
    return UnitVector3::normalized(v);
  }

  RotationMatrix rotation() {
    const UnitVector3 axis = unit();
    return so3_exp(axis.vec(), uniform(0.0, std::numbers::pi));
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

/// Smallest eigenvalue of a symmetric 3x3 matrix from the roots of its
/// characteristic polynomial (trigonometric form of Cardano).
inline double char_poly_min_eigenvalue(const Matrix3& a) {
  const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
  const double q = a.trace() / 3.0;
  if (p1 == 0.0) return std::min({a(0, 0), a(1, 1), a(2, 2)});
  const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) +
                    (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  const Matrix3 b = (a - q * Matrix3::Identity()) / p;
  const double r = std::clamp(b.determinant() / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  return q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
}

inline double max_abs(const Matrix3& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace bearform::testing
