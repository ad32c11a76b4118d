#pragma once
#ifndef MUDGAIN_WILSON_HPP
#define MUDGAIN_WILSON_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace mudgain {

/// Two-sided 95% standard normal quantile.
inline constexpr double kZ95 = 1.959963984540054;

struct WilsonInterval {
  double center = 0.0;
  double half_width = 0.0;

  double lower() const { return center - half_width; }
  double upper() const { return center + half_width; }
};

/// Wilson score interval for `events` successes out of `n` Bernoulli trials.
inline WilsonInterval wilson_interval(std::uint64_t events, std::uint64_t n, double z = kZ95) {
  if (n == 0) throw std::invalid_argument("wilson_interval: n must be positive");
  if (events > n) throw std::invalid_argument("wilson_interval: events exceed trials");
  const double nd = static_cast<double>(n);
  const double p = static_cast<double>(events) / nd;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nd;
  const double center = (p + z2 / (2.0 * nd)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / nd + z2 / (4.0 * nd * nd));
  return {center, half};
}

}  // namespace mudgain

#endif  // MUDGAIN_WILSON_HPP
