#pragma once
#ifndef MUDGAIN_REGION_HPP
#define MUDGAIN_REGION_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Instantaneous Gaussian MAC capacity region and per-user decodability under
// joint decoding. A set D of users is decodable when its rate vector lies in
// the MAC region with every user outside D treated as Gaussian noise; user k
// is in individual outage iff no decodable set contains k.
//
// Rates are spectral efficiencies on the shared subchannel (bits/s/Hz) and
// SNRs are linear, both normalized to unit noise power.

namespace mudgain {

/// Largest J the exhaustive evaluators accept (2^J - 1 subset constraints).
inline constexpr std::size_t kExhaustiveUserCap = 25;

class RegionSizeError : public std::length_error {
 public:
  explicit RegionSizeError(std::size_t users)
      : std::length_error("exhaustive region evaluation supports at most " +
                          std::to_string(kExhaustiveUserCap) + " users, got " +
                          std::to_string(users) + "; use the symmetric path") {}
};

struct DecodeReport {
  /// decodable[k] is true iff some decodable set contains user k.
  std::vector<bool> decodable;
  /// A decodable set of maximum cardinality, ascending user indices.
  std::vector<std::size_t> max_decodable_set;

  std::size_t outage_count() const {
    return static_cast<std::size_t>(std::count(decodable.begin(), decodable.end(), false));
  }

  friend bool operator==(const DecodeReport&, const DecodeReport&) = default;
};

/// One MAC constraint: sum_rate <= log2(1 + sum_snr / (1 + interference)).
/// Points on the boundary are achievable.
inline bool rate_supported(double sum_rate, double sum_snr, double interference) {
  return sum_rate <= std::log1p(sum_snr / (1.0 + interference)) / std::numbers::ln2;
}

namespace detail {

inline void check_vectors(std::span<const double> rates, std::span<const double> snrs) {
  if (rates.size() != snrs.size()) {
    throw std::invalid_argument("rate and SNR vectors differ in length");
  }
  if (rates.empty()) throw std::invalid_argument("at least one user is required");
  for (double r : rates) {
    if (!(r >= 0.0)) throw std::invalid_argument("rates must be nonnegative");
  }
  for (double g : snrs) {
    if (!(g >= 0.0)) throw std::invalid_argument("SNRs must be nonnegative");
  }
}

inline void check_exhaustive_size(std::size_t n) {
  if (n > kExhaustiveUserCap) throw RegionSizeError{n};
}

// Descending SNR order; ties broken by ascending user index.
inline void sort_by_snr_desc(std::span<const double> snrs, std::vector<std::size_t>& order) {
  order.resize(snrs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return snrs[a] > snrs[b]; });
}

/// Size m of the largest decodable prefix of a descending SNR vector under a
/// common per-user rate. tail is scratch of size n + 1.
///
/// With equal rates the binding constraint among all size-s subsets of the
/// prefix is the one holding its s weakest users, so each candidate m costs
/// at most m checks.
inline std::size_t largest_decodable_prefix(double rate, std::span<const double> sorted_desc,
                                            std::vector<double>& tail) {
  const std::size_t n = sorted_desc.size();
  tail.assign(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) tail[i] = tail[i + 1] + sorted_desc[i];

  for (std::size_t m = n; m >= 1; --m) {
    const double interference = tail[m];
    double snr_sum = 0.0;
    double rate_sum = 0.0;
    bool ok = true;
    for (std::size_t s = 1; s <= m; ++s) {
      snr_sum += sorted_desc[m - s];
      rate_sum += rate;
      if (!rate_supported(rate_sum, snr_sum, interference)) {
        ok = false;
        break;
      }
    }
    if (ok) return m;
  }
  return 0;
}

/// Per-rank critical powers for a common rate. unit_desc holds the SNRs at
/// unit sum power in descending order; spread[s-1] = 2^(s·rate) - 1. On
/// return crit[i] is the smallest power at which the user of rank i is
/// decodable (+inf if none): it lies in outage at power p iff p < crit[i].
///
/// The top-m set is decodable at p iff p·(T_s - c_s·N_m) >= c_s for every s,
/// where T_s sums its s weakest unit SNRs and N_m sums the users below it.
/// crit[i] is then the minimum over m > i of the top-m thresholds.
inline void critical_powers_by_rank(std::span<const double> unit_desc,
                                    std::span<const double> spread, std::span<double> crit,
                                    std::vector<double>& tail) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const std::size_t n = unit_desc.size();
  tail.assign(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) tail[i] = tail[i + 1] + unit_desc[i];

  double running_min = kInf;
  for (std::size_t m = n; m >= 1; --m) {
    const double interference = tail[m];
    double snr_sum = 0.0;
    double threshold = 0.0;
    for (std::size_t s = 1; s <= m; ++s) {
      snr_sum += unit_desc[m - s];
      const double c = spread[s - 1];
      const double margin = snr_sum - c * interference;
      if (!(margin > 0.0)) {
        threshold = kInf;
        break;
      }
      threshold = std::max(threshold, c / margin);
      // Larger prefixes already reach these ranks at a lower power.
      if (threshold >= running_min) break;
    }
    running_min = std::min(running_min, threshold);
    crit[m - 1] = running_min;
  }
}

inline std::vector<double> rate_spread_table(double rate, std::size_t n) {
  std::vector<double> spread(n);
  double rate_sum = 0.0;
  for (std::size_t s = 1; s <= n; ++s) {
    rate_sum += rate;
    spread[s - 1] = std::expm1(rate_sum * std::numbers::ln2);
  }
  return spread;
}

}  // namespace detail

/// Exhaustive capacity-region membership: every nonempty subset S must satisfy
/// sum_{k in S} r_k <= log2(1 + sum_{k in S} snr_k / (1 + noise_extra)).
inline bool in_capacity_region(std::span<const double> rates, std::span<const double> snrs,
                               double noise_extra = 0.0) {
  detail::check_vectors(rates, snrs);
  detail::check_exhaustive_size(rates.size());
  if (!(noise_extra >= 0.0)) throw std::invalid_argument("noise_extra must be nonnegative");

  const std::size_t n = rates.size();
  const std::uint32_t full = (1u << n) - 1u;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    double rate_sum = 0.0;
    double snr_sum = 0.0;
    for (std::uint32_t bits = mask; bits; bits &= bits - 1) {
      const auto k = static_cast<std::size_t>(std::countr_zero(bits));
      rate_sum += rates[k];
      snr_sum += snrs[k];
    }
    if (!rate_supported(rate_sum, snr_sum, noise_extra)) return false;
  }
  return true;
}

/**
 * Reference decodability: enumerates every candidate set D and tests it with
 * the users outside D as noise. Candidates are visited largest first, so the
 * first decodable one found is a maximum decodable set; a candidate whose
 * members are all already known decodable cannot change the outcome and is
 * skipped.
 */
inline DecodeReport per_user_decodable(std::span<const double> rates,
                                       std::span<const double> snrs) {
  detail::check_vectors(rates, snrs);
  detail::check_exhaustive_size(rates.size());

  const std::size_t n = rates.size();
  const std::uint32_t full = (1u << n) - 1u;
  std::vector<double> rate_sum(std::size_t{1} << n, 0.0);
  std::vector<double> snr_sum(std::size_t{1} << n, 0.0);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const std::uint32_t low = mask & (~mask + 1u);
    const auto k = static_cast<std::size_t>(std::countr_zero(low));
    rate_sum[mask] = rate_sum[mask ^ low] + rates[k];
    snr_sum[mask] = snr_sum[mask ^ low] + snrs[k];
  }

  auto set_decodable = [&](std::uint32_t d) {
    const double interference = snr_sum[full ^ d];
    for (std::uint32_t s = d; s; s = (s - 1) & d) {
      if (!rate_supported(rate_sum[s], snr_sum[s], interference)) return false;
    }
    return true;
  };

  std::uint32_t flagged = 0;
  std::uint32_t best = 0;
  for (std::size_t size = n; size >= 1; --size) {
    // Gosper's hack: all masks of the given popcount in increasing order.
    std::uint64_t d = (std::uint64_t{1} << size) - 1;
    while (d <= full) {
      const auto mask = static_cast<std::uint32_t>(d);
      if ((mask & ~flagged) != 0 && set_decodable(mask)) {
        flagged |= mask;
        if (best == 0) best = mask;
      }
      const std::uint64_t c = d & (~d + 1);
      const std::uint64_t r = d + c;
      d = (((r ^ d) >> 2) / c) | r;
    }
  }

  DecodeReport report;
  report.decodable.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    report.decodable[k] = (flagged >> k) & 1u;
    if ((best >> k) & 1u) report.max_decodable_set.push_back(k);
  }
  return report;
}

/// Fast path for a common per-user rate. The decodable users are the strongest
/// m users for the largest m whose prefix is decodable. Agreement with
/// per_user_decodable is checked by the test suite, not assumed.
inline DecodeReport symmetric_prefix_decodable(double r_common, std::span<const double> snrs) {
  if (snrs.empty()) throw std::invalid_argument("at least one user is required");
  if (!(r_common >= 0.0)) throw std::invalid_argument("rates must be nonnegative");
  for (double g : snrs) {
    if (!(g >= 0.0)) throw std::invalid_argument("SNRs must be nonnegative");
  }

  std::vector<std::size_t> order;
  detail::sort_by_snr_desc(snrs, order);
  std::vector<double> sorted(snrs.size());
  for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = snrs[order[i]];

  std::vector<double> tail;
  const std::size_t m = detail::largest_decodable_prefix(r_common, sorted, tail);

  DecodeReport report;
  report.decodable.assign(snrs.size(), false);
  for (std::size_t i = 0; i < m; ++i) report.decodable[order[i]] = true;
  report.max_decodable_set.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));
  std::sort(report.max_decodable_set.begin(), report.max_decodable_set.end());
  return report;
}

/// Per-user critical sum powers for a common rate: user k is decodable at
/// sum power p iff p >= result[k]. unit_snrs are the SNRs at p = 1.
inline std::vector<double> symmetric_critical_powers(double r_common,
                                                     std::span<const double> unit_snrs) {
  if (unit_snrs.empty()) throw std::invalid_argument("at least one user is required");
  if (!(r_common > 0.0)) throw std::invalid_argument("common rate must be positive");

  std::vector<std::size_t> order;
  detail::sort_by_snr_desc(unit_snrs, order);
  std::vector<double> sorted(unit_snrs.size());
  for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = unit_snrs[order[i]];

  const auto spread = detail::rate_spread_table(r_common, sorted.size());
  std::vector<double> by_rank(sorted.size());
  std::vector<double> tail;
  detail::critical_powers_by_rank(sorted, spread, by_rank, tail);

  std::vector<double> out(unit_snrs.size());
  for (std::size_t i = 0; i < order.size(); ++i) out[order[i]] = by_rank[i];
  return out;
}

}  // namespace mudgain

#endif  // MUDGAIN_REGION_HPP
