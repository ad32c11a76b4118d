#pragma once
#ifndef MUDGAIN_ANALYTICS_HPP
#define MUDGAIN_ANALYTICS_HPP

#include <mudgain/model.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

// Closed-form outage and power expressions for Rayleigh (Exp(1)) channel
// parameters. Every quantity is normalized to N_0 W = 1. Forms of the type
// 1 - exp(-x) and ln(1 - eps) go through expm1/log1p so small outage targets
// keep full precision.

namespace mudgain {

enum class GainKind { vs_j, vs_eta, upper_bound };

/// One point of a MUD gain curve. `abscissa` is J or eta_s depending on kind.
struct GainPoint {
  double abscissa = 0.0;
  double gain_db = 0.0;
  GainKind kind = GainKind::vs_j;
};

namespace detail {

inline void require_positive(double x, const char* what) {
  if (!(x > 0.0) || std::isnan(x)) {
    throw std::domain_error(std::string(what) + " must be positive");
  }
}

inline void require_probability(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::domain_error("outage probability must lie in (0, 1)");
  }
}

// 2^x - 1 without cancellation for small x.
inline double exp2m1(double x) { return std::expm1(x * std::numbers::ln2); }

}  // namespace detail

/// OMA individual outage: Pr[H < (2^eta_s - 1) / p].
inline double oma_outage(double eta_s, double p_norm) {
  detail::require_positive(eta_s, "eta_s");
  detail::require_positive(p_norm, "p_norm");
  return -std::expm1(-detail::exp2m1(eta_s) / p_norm);
}

/// Sum power OMA needs to meet an individual outage target eps.
inline double oma_required_power(double eta_s, double eps) {
  detail::require_positive(eta_s, "eta_s");
  detail::require_probability(eps);
  return -detail::exp2m1(eta_s) / std::log1p(-eps);
}

/// Channel-parameter threshold below which a user fails even with every other
/// user of a K-user full-band superposition removed: K (2^(eta_s/K) - 1) / p.
/// k = 1 is the OMA threshold.
inline double single_user_threshold(double eta_s, unsigned k, double p_norm) {
  detail::require_positive(eta_s, "eta_s");
  detail::require_positive(p_norm, "p_norm");
  if (k < 1) throw std::domain_error("k must be at least 1");
  const double kd = static_cast<double>(k);
  return kd * detail::exp2m1(eta_s / kd) / p_norm;
}

/// Two-term expansion of single_user_threshold in 1/K around K = infinity.
inline double threshold_taylor_first_order(double eta_s, unsigned k, double p_norm) {
  detail::require_positive(eta_s, "eta_s");
  detail::require_positive(p_norm, "p_norm");
  if (k < 1) throw std::domain_error("k must be at least 1");
  const double a = eta_s * std::numbers::ln2;
  return (a + a * a / (2.0 * static_cast<double>(k))) / p_norm;
}

/// Infimum of single_user_threshold over K: eta_s ln 2 / p.
inline double threshold_limit(double eta_s, double p_norm) {
  detail::require_positive(eta_s, "eta_s");
  detail::require_positive(p_norm, "p_norm");
  return eta_s * std::numbers::ln2 / p_norm;
}

/// Individual outage lower bound with infinitely many superposed users:
/// 1 - 2^(-eta_s / p).
inline double noma_outage_lower_bound(double eta_s, double p_norm) {
  detail::require_positive(eta_s, "eta_s");
  detail::require_positive(p_norm, "p_norm");
  return -std::expm1(-eta_s * std::numbers::ln2 / p_norm);
}

/// Smallest sum power any NOMA superposition can meet eps with:
/// -eta_s / log2(1 - eps).
inline double noma_power_lower_bound(double eta_s, double eps) {
  detail::require_positive(eta_s, "eta_s");
  detail::require_probability(eps);
  return -eta_s * std::numbers::ln2 / std::log1p(-eps);
}

/// MUD gain in dB: OMA power minus NOMA power, both already in dB.
inline double mud_gain(double p_oma_db, double p_noma_db) { return p_oma_db - p_noma_db; }

/// Upper bound of the MUD gain in dB at (eta_s, eps).
///
/// Algebraically this collapses to 10 log10((2^eta_s - 1) ln 2 / eta_s) and
/// does not depend on eps; both power terms are kept so the value matches
/// mud_gain(oma_required_power, noma_power_lower_bound) to rounding.
inline double mud_gain_upper_bound(double eta_s, double eps) {
  return mud_gain(to_db(oma_required_power(eta_s, eps)),
                  to_db(noma_power_lower_bound(eta_s, eps)));
}

}  // namespace mudgain

#endif  // MUDGAIN_ANALYTICS_HPP
