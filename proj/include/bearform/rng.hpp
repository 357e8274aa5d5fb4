#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace bearform {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Every draw is
/// a pure function of (key, counter), so noise samples can be addressed by
/// (tick, agent, edge, purpose) and stay identical under any evaluation order.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr std::string_view kName = "philox4x32-10";

  explicit Philox4x32(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  static Counter block(Counter counter, Key key);

  Counter operator()(const Counter& counter) const { return block(counter, key_); }

  /// Four uniforms in (0, 1) for the given counter.
  std::array<double, 4> uniforms(const Counter& counter) const;

  /// Four independent standard normals via Box-Muller.
  std::array<double, 4> normals(const Counter& counter) const;

 private:
  Key key_;
};

}  // namespace bearform
