#pragma once
#ifndef MUDGAIN_MODEL_HPP
#define MUDGAIN_MODEL_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mudgain {

/// Linear power ratio to decibels (10·log10).
inline double to_db(double linear) { return 10.0 * std::log10(linear); }

inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

/**
 * A normalized operating point of the symmetric block-fading MAC.
 *
 * All quantities are dimensionless ratios: the sum spectral efficiency
 * eta_s = R_s/W in bits/s/Hz and the sum power p_norm = P_s/(N_0 W), stored
 * linear. The total user count K is optional metadata; per-user SNRs and
 * rates depend only on the superposition factor J, so one subchannel with J
 * users is statistically representative of all K/J subchannels.
 *
 * J = 1 is OMA (one user per subchannel), J > 1 is NOMA with J superposed
 * users sharing a subchannel of bandwidth WJ/K.
 */
class ScenarioConfig {
 public:
  ScenarioConfig(double eta_s, unsigned j_users, double p_norm,
                 std::optional<unsigned> k_total = std::nullopt)
      : eta_s_{eta_s}, p_norm_{p_norm}, j_users_{j_users}, k_total_{k_total} {
    if (!(eta_s > 0.0) || !std::isfinite(eta_s)) {
      throw std::invalid_argument("ScenarioConfig: eta_s must be positive and finite");
    }
    if (!(p_norm > 0.0)) {
      throw std::invalid_argument("ScenarioConfig: p_norm must be positive");
    }
    if (j_users < 1) {
      throw std::invalid_argument("ScenarioConfig: j_users must be at least 1");
    }
    if (k_total && (*k_total < 1 || *k_total % j_users != 0)) {
      throw std::invalid_argument("ScenarioConfig: k_total must be a positive multiple of j_users");
    }
  }

  static ScenarioConfig from_power_db(double eta_s, unsigned j_users, double p_db,
                                      std::optional<unsigned> k_total = std::nullopt) {
    return ScenarioConfig{eta_s, j_users, from_db(p_db), k_total};
  }

  double eta_s() const { return eta_s_; }
  unsigned j_users() const { return j_users_; }
  double p_norm() const { return p_norm_; }
  double p_db() const { return to_db(p_norm_); }
  std::optional<unsigned> k_total() const { return k_total_; }

  ScenarioConfig with_power(double p_norm) const {
    return ScenarioConfig{eta_s_, j_users_, p_norm, k_total_};
  }

 private:
  double eta_s_;
  double p_norm_;
  unsigned j_users_;
  std::optional<unsigned> k_total_;
};

/// Channel parameters H_k = |h_k|^2 of one subchannel's J users for one block.
struct ChannelDraw {
  std::vector<double> gains;

  std::size_t size() const { return gains.size(); }
  std::span<const double> view() const { return gains; }
};

/// Received SNR of a user with channel parameter h: h · P_s / (N_0 J W).
inline double per_user_snr(double h, const ScenarioConfig& cfg) {
  return h * cfg.p_norm() / static_cast<double>(cfg.j_users());
}

/// Spectral efficiency each user must carry on its shared subchannel.
inline double per_user_target_se(const ScenarioConfig& cfg) {
  return cfg.eta_s() / static_cast<double>(cfg.j_users());
}

inline std::vector<double> per_user_snrs(std::span<const double> gains, const ScenarioConfig& cfg) {
  std::vector<double> out;
  out.reserve(gains.size());
  for (double h : gains) out.push_back(per_user_snr(h, cfg));
  return out;
}

}  // namespace mudgain

#endif  // MUDGAIN_MODEL_HPP
