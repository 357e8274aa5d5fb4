#include "bearform/rng.hpp"

#include <cmath>
#include <numbers>

namespace bearform {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(prod >> 32);
  lo = static_cast<std::uint32_t>(prod);
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

std::array<double, 4> Philox4x32::uniforms(const Counter& counter) const {
  const auto bits = (*this)(counter);
  std::array<double, 4> u{};
  for (std::size_t k = 0; k < 4; ++k) u[k] = (static_cast<double>(bits[k]) + 0.5) * 0x1p-32;
  return u;
}

std::array<double, 4> Philox4x32::normals(const Counter& counter) const {
  const auto u = uniforms(counter);
  std::array<double, 4> z{};
  for (std::size_t k = 0; k < 4; k += 2) {
    const double radius = std::sqrt(-2.0 * std::log(u[k]));
    const double angle = 2.0 * std::numbers::pi * u[k + 1];
    z[k] = radius * std::cos(angle);
    z[k + 1] = radius * std::sin(angle);
  }
  return z;
}

}  // namespace bearform
