#pragma once
#ifndef MUDGAIN_PHILOX_HPP
#define MUDGAIN_PHILOX_HPP

#include <array>
#include <cmath>
#include <cstdint>

namespace mudgain {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A pure
/// function of (counter, key), so any draw can be reproduced from its
/// coordinates without replaying a stream.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter generate(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// Uniform in [0, 1) with 53 random bits.
constexpr double to_unit_interval(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (std::uint64_t{hi} << 32 | lo) >> 11;
  return static_cast<double>(bits) * 0x1.0p-53;
}

/// Keyed uniform stream addressed by (seed, block, lane). One Philox call
/// yields two uniforms, so lanes 2i and 2i+1 share a counter.
class KeyedUniforms {
 public:
  explicit constexpr KeyedUniforms(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  template <typename Out>
  void fill(std::uint64_t block, std::size_t count, Out&& out) const {
    for (std::size_t pair = 0; 2 * pair < count; ++pair) {
      const auto r = Philox4x32::generate(
          {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
           static_cast<std::uint32_t>(pair), static_cast<std::uint32_t>(std::uint64_t{pair} >> 32)},
          key_);
      out(2 * pair, to_unit_interval(r[0], r[1]));
      if (2 * pair + 1 < count) out(2 * pair + 1, to_unit_interval(r[2], r[3]));
    }
  }

  double at(std::uint64_t block, std::size_t lane) const {
    const auto r = Philox4x32::generate(
        {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
         static_cast<std::uint32_t>(lane / 2), static_cast<std::uint32_t>(std::uint64_t{lane / 2} >> 32)},
        key_);
    return lane % 2 == 0 ? to_unit_interval(r[0], r[1]) : to_unit_interval(r[2], r[3]);
  }

 private:
  Philox4x32::Key key_;
};

/// Exp(1) variate by inversion: -ln(1 - u).
inline double exponential_from_uniform(double u) { return -std::log1p(-u); }

}  // namespace mudgain

#endif  // MUDGAIN_PHILOX_HPP
