#pragma once
#ifndef MUDGAIN_MONTECARLO_HPP
#define MUDGAIN_MONTECARLO_HPP

#include <mudgain/analytics.hpp>
#include <mudgain/model.hpp>
#include <mudgain/philox.hpp>
#include <mudgain/region.hpp>
#include <mudgain/wilson.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace mudgain {

/// Which channel blocks to simulate. Draw (seed, trial, user) is a pure
/// function of its coordinates, so `workers` only changes how trials are
/// sharded, never the result.
struct TrialPlan {
  std::uint64_t seed = 0;
  std::uint64_t trials = 1'000'000;
  unsigned workers = 1;

  void validate() const {
    if (trials < 1) throw std::invalid_argument("TrialPlan: trials must be at least 1");
    if (workers < 1) throw std::invalid_argument("TrialPlan: workers must be at least 1");
  }
};

/// Pooled individual outage frequency over J users x trials blocks.
struct OutageEstimate {
  double eps_hat = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t outage_user_blocks = 0;
  std::uint64_t user_blocks = 0;
  double ci_halfwidth_95 = 0.0;
  WilsonInterval wilson;
};

inline OutageEstimate make_outage_estimate(std::uint64_t outages, std::uint64_t trials,
                                           unsigned j_users) {
  OutageEstimate est;
  est.trials = trials;
  est.outage_user_blocks = outages;
  est.user_blocks = trials * j_users;
  est.eps_hat = static_cast<double>(outages) / static_cast<double>(est.user_blocks);
  est.wilson = wilson_interval(outages, est.user_blocks);
  est.ci_halfwidth_95 = est.wilson.half_width;
  return est;
}

/// Writes the Exp(1) channel parameters of one block into `gains`.
inline void fill_channel_gains(std::uint64_t seed, std::uint64_t trial_index,
                               std::span<double> gains) {
  KeyedUniforms{seed}.fill(trial_index, gains.size(), [&](std::size_t k, double u) {
    gains[k] = exponential_from_uniform(u);
  });
}

inline ChannelDraw sample_channels(unsigned j_users, std::uint64_t trial_index,
                                   std::uint64_t seed) {
  ChannelDraw draw;
  draw.gains.resize(j_users);
  fill_channel_gains(seed, trial_index, draw.gains);
  return draw;
}

/// Runs fn(first_trial, end_trial, shard) over contiguous shards, one thread
/// per shard. fn must only write shard-private state.
template <typename Fn>
void for_each_trial_shard(const TrialPlan& plan, Fn&& fn) {
  plan.validate();
  const std::uint64_t shards = std::min<std::uint64_t>(plan.workers, plan.trials);
  const std::uint64_t base = plan.trials / shards;
  const std::uint64_t extra = plan.trials % shards;
  auto bounds = [&](std::uint64_t s) {
    const std::uint64_t first = s * base + std::min(s, extra);
    return std::pair{first, first + base + (s < extra ? 1 : 0)};
  };
  if (shards == 1) {
    fn(std::uint64_t{0}, plan.trials, std::size_t{0});
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(shards);
  threads.reserve(shards);
  for (std::uint64_t s = 0; s < shards; ++s) {
    threads.emplace_back([&, s] {
      try {
        const auto [first, last] = bounds(s);
        fn(first, last, static_cast<std::size_t>(s));
      } catch (...) {
        errors[s] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline std::size_t shard_count(const TrialPlan& plan) {
  return static_cast<std::size_t>(std::min<std::uint64_t>(plan.workers, plan.trials));
}

enum class DecodePath { symmetric_prefix, exhaustive };

/// Individual outage at one operating point by direct decodability tests.
inline OutageEstimate estimate_individual_outage(const ScenarioConfig& cfg, const TrialPlan& plan,
                                                 DecodePath path = DecodePath::symmetric_prefix) {
  plan.validate();
  const unsigned j = cfg.j_users();
  if (path == DecodePath::exhaustive) detail::check_exhaustive_size(j);
  const double rate = per_user_target_se(cfg);

  std::vector<std::uint64_t> outages(shard_count(plan), 0);
  for_each_trial_shard(plan, [&](std::uint64_t first, std::uint64_t last, std::size_t shard) {
    std::vector<double> gains(j);
    std::vector<double> snrs(j);
    std::vector<double> tail;
    const std::vector<double> rates(j, rate);
    std::uint64_t count = 0;
    for (std::uint64_t t = first; t < last; ++t) {
      fill_channel_gains(plan.seed, t, gains);
      for (unsigned k = 0; k < j; ++k) snrs[k] = per_user_snr(gains[k], cfg);
      if (path == DecodePath::exhaustive) {
        count += per_user_decodable(rates, snrs).outage_count();
      } else {
        std::sort(snrs.begin(), snrs.end(), std::greater<>{});
        count += j - detail::largest_decodable_prefix(rate, snrs, tail);
      }
    }
    outages[shard] = count;
  });
  return make_outage_estimate(std::accumulate(outages.begin(), outages.end(), std::uint64_t{0}),
                              plan.trials, j);
}

/// Calls sink(crit) for the critical sum power of every (trial, user) in a
/// shard. Used to evaluate outage on common random numbers at many powers.
template <typename Sink>
void for_each_critical_power(double eta_s, unsigned j_users, std::uint64_t seed,
                             std::uint64_t first, std::uint64_t last, Sink&& sink) {
  const ScenarioConfig unit{eta_s, j_users, 1.0};
  const auto spread = detail::rate_spread_table(per_user_target_se(unit), j_users);
  std::vector<double> gains(j_users);
  std::vector<double> crit(j_users);
  std::vector<double> tail;
  for (std::uint64_t t = first; t < last; ++t) {
    fill_channel_gains(seed, t, gains);
    for (auto& g : gains) g = per_user_snr(g, unit);
    std::sort(gains.begin(), gains.end(), std::greater<>{});
    detail::critical_powers_by_rank(gains, spread, crit, tail);
    for (double c : crit) sink(c);
  }
}

/**
 * Outage as a function of sum power on one fixed set of draws.
 *
 * Each (trial, user) is in outage at power p iff p is below its critical
 * power, so the empirical outage over [p_min, p_max] is a non-increasing step
 * function. Only critical powers inside the window are kept.
 */
class OutageProfile {
 public:
  OutageProfile(double eta_s, unsigned j_users, const TrialPlan& plan, double p_min, double p_max)
      : j_users_{j_users}, trials_{plan.trials}, p_min_{p_min}, p_max_{p_max} {
    if (!(p_min > 0.0 && p_min <= p_max)) {
      throw std::invalid_argument("OutageProfile: need 0 < p_min <= p_max");
    }
    std::vector<std::vector<double>> kept(shard_count(plan));
    std::vector<std::uint64_t> never(kept.size(), 0);
    for_each_trial_shard(plan, [&](std::uint64_t first, std::uint64_t last, std::size_t shard) {
      auto& out = kept[shard];
      std::uint64_t above = 0;
      for_each_critical_power(eta_s, j_users, plan.seed, first, last, [&](double c) {
        if (c > p_max) {
          ++above;
        } else if (c > p_min) {
          out.push_back(c);
        }
      });
      never[shard] = above;
    });
    always_out_ = std::accumulate(never.begin(), never.end(), std::uint64_t{0});
    std::size_t total = 0;
    for (const auto& v : kept) total += v.size();
    window_.reserve(total);
    for (const auto& v : kept) window_.insert(window_.end(), v.begin(), v.end());
    std::sort(window_.begin(), window_.end());
  }

  double p_min() const { return p_min_; }
  double p_max() const { return p_max_; }
  unsigned j_users() const { return j_users_; }
  std::uint64_t trials() const { return trials_; }

  std::uint64_t outage_count(double p) const {
    if (!(p >= p_min_ && p <= p_max_)) {
      throw std::out_of_range("OutageProfile: power outside the simulated window");
    }
    const auto it = std::upper_bound(window_.begin(), window_.end(), p);
    return always_out_ + static_cast<std::uint64_t>(window_.end() - it);
  }

  OutageEstimate estimate(double p) const {
    return make_outage_estimate(outage_count(p), trials_, j_users_);
  }

 private:
  unsigned j_users_;
  std::uint64_t trials_;
  double p_min_;
  double p_max_;
  std::uint64_t always_out_ = 0;
  std::vector<double> window_;
};

class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Search window around the closed-form bracket, in dB.
struct PowerSearchOptions {
  double margin_db = 1.0;
};

struct RequiredPower {
  double power = 0.0;
  double power_db = 0.0;
  /// Outage on the search draws at the returned power.
  OutageEstimate at_power;
  /// Powers between which eps_target lies inside the 95% Wilson interval.
  double ci_low_db = 0.0;
  double ci_high_db = 0.0;
};

namespace detail {

/// Smallest x in (lo, hi] with satisfied(x), to within tol; expects
/// !satisfied(lo) and satisfied(hi) and a monotone predicate.
template <typename Pred>
double bisect_db(double lo, double hi, double tol, Pred&& satisfied) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (satisfied(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

template <typename Pred>
double clamped_crossing_db(double lo, double hi, double tol, Pred&& satisfied) {
  if (satisfied(lo)) return lo;
  if (!satisfied(hi)) return hi;
  return bisect_db(lo, hi, tol, satisfied);
}

}  // namespace detail

/**
 * Smallest sum power whose simulated individual outage meets eps_target.
 *
 * One set of draws is generated up front and reused at every probed power,
 * which makes the estimated outage a deterministic non-increasing function of
 * power. Bisection in dB then runs inside [infinite-user bound - margin,
 * OMA closed form + margin].
 */
inline RequiredPower required_power(double eta_s, unsigned j_users, double eps_target,
                                    const TrialPlan& plan, double tol_db,
                                    PowerSearchOptions options = {}) {
  if (!(tol_db > 0.0)) throw std::invalid_argument("required_power: tol_db must be positive");
  const double lo_db = to_db(noma_power_lower_bound(eta_s, eps_target)) - options.margin_db;
  const double hi_db = to_db(oma_required_power(eta_s, eps_target)) + options.margin_db;
  const OutageProfile profile{eta_s, j_users, plan, from_db(lo_db), from_db(hi_db)};

  auto power_at = [&](double db) {
    return std::clamp(from_db(db), profile.p_min(), profile.p_max());
  };
  auto meets = [&](double db) { return profile.estimate(power_at(db)).eps_hat <= eps_target; };

  if (meets(lo_db)) {
    throw BracketError("required_power: outage target already met at the window floor " +
                       std::to_string(lo_db) + " dB; widen the search window");
  }
  if (!meets(hi_db)) {
    throw BracketError("required_power: outage target not reached at the window ceiling " +
                       std::to_string(hi_db) + " dB; widen the search window");
  }

  RequiredPower result;
  result.power_db = detail::bisect_db(lo_db, hi_db, tol_db, meets);
  result.power = from_db(result.power_db);
  result.at_power = profile.estimate(power_at(result.power_db));
  result.ci_low_db = detail::clamped_crossing_db(lo_db, hi_db, tol_db, [&](double db) {
    return profile.estimate(power_at(db)).wilson.lower() <= eps_target;
  });
  result.ci_high_db = detail::clamped_crossing_db(lo_db, hi_db, tol_db, [&](double db) {
    return profile.estimate(power_at(db)).wilson.upper() <= eps_target;
  });
  return result;
}

struct GainEstimate {
  GainPoint point;
  double ci_db = 0.0;
  double upper_bound_db = 0.0;
  double required_power_db = 0.0;
};

/// Simulated MUD gain for each J. The OMA reference is the closed form, so
/// J = 1 maps to exactly 0 dB.
inline std::vector<GainEstimate> mud_gain_curve(double eta_s, double eps_target,
                                                std::span<const unsigned> j_list,
                                                const TrialPlan& plan, double tol_db) {
  if (j_list.empty()) throw std::invalid_argument("mud_gain_curve: empty J list");
  const double oma_db = to_db(oma_required_power(eta_s, eps_target));
  const double bound_db = mud_gain_upper_bound(eta_s, eps_target);
  std::vector<GainEstimate> out;
  out.reserve(j_list.size());
  for (unsigned j : j_list) {
    if (j < 1) throw std::invalid_argument("mud_gain_curve: J must be at least 1");
    GainEstimate g;
    g.point.abscissa = j;
    g.point.kind = GainKind::vs_j;
    g.upper_bound_db = bound_db;
    if (j == 1) {
      g.point.gain_db = 0.0;
      g.required_power_db = oma_db;
    } else {
      const auto rp = required_power(eta_s, j, eps_target, plan, tol_db);
      g.point.gain_db = mud_gain(oma_db, rp.power_db);
      g.required_power_db = rp.power_db;
      g.ci_db = 0.5 * (rp.ci_high_db - rp.ci_low_db);
    }
    out.push_back(g);
  }
  return out;
}

struct BoundComparisonRow {
  double p_db = 0.0;
  unsigned j_users = 0;
  OutageEstimate estimate;
  double eps_lower_bound = 0.0;
};

/**
 * Simulated individual outage for every (power, J) pair on a dB grid,
 * alongside the infinite-user lower bound. All grid points of one J share
 * the same draws. Rows follow the grid order, J varying fastest.
 */
inline std::vector<BoundComparisonRow> bound_comparison_curve(double eta_s,
                                                              std::span<const double> p_db_grid,
                                                              std::span<const unsigned> j_list,
                                                              const TrialPlan& plan) {
  if (p_db_grid.empty()) throw std::invalid_argument("bound_comparison_curve: empty power grid");
  if (j_list.empty()) throw std::invalid_argument("bound_comparison_curve: empty J list");

  std::vector<double> sorted_p(p_db_grid.size());
  std::transform(p_db_grid.begin(), p_db_grid.end(), sorted_p.begin(), from_db);
  std::sort(sorted_p.begin(), sorted_p.end());
  sorted_p.erase(std::unique(sorted_p.begin(), sorted_p.end()), sorted_p.end());
  const std::size_t g = sorted_p.size();

  // outages[ji][gi]: (trial, user) pairs in outage at sorted_p[gi].
  std::vector<std::vector<std::uint64_t>> outages;
  for (unsigned j : j_list) {
    if (j < 1) throw std::invalid_argument("bound_comparison_curve: J must be at least 1");
    std::vector<std::vector<std::uint64_t>> hist(shard_count(plan),
                                                 std::vector<std::uint64_t>(g + 1, 0));
    for_each_trial_shard(plan, [&](std::uint64_t first, std::uint64_t last, std::size_t shard) {
      auto& h = hist[shard];
      for_each_critical_power(eta_s, j, plan.seed, first, last, [&](double c) {
        // Number of grid powers strictly below the critical power.
        ++h[static_cast<std::size_t>(std::lower_bound(sorted_p.begin(), sorted_p.end(), c) -
                                     sorted_p.begin())];
      });
    });
    std::vector<std::uint64_t> merged(g + 1, 0);
    for (const auto& h : hist) {
      for (std::size_t i = 0; i <= g; ++i) merged[i] += h[i];
    }
    std::vector<std::uint64_t> at(g, 0);
    std::uint64_t running = 0;
    for (std::size_t i = g; i-- > 0;) {
      running += merged[i + 1];
      at[i] = running;
    }
    outages.push_back(std::move(at));
  }

  std::vector<BoundComparisonRow> rows;
  rows.reserve(p_db_grid.size() * j_list.size());
  for (double p_db : p_db_grid) {
    const double p = from_db(p_db);
    const auto gi = static_cast<std::size_t>(
        std::lower_bound(sorted_p.begin(), sorted_p.end(), p) - sorted_p.begin());
    for (std::size_t ji = 0; ji < j_list.size(); ++ji) {
      BoundComparisonRow row;
      row.p_db = p_db;
      row.j_users = j_list[ji];
      row.estimate = make_outage_estimate(outages[ji][gi], plan.trials, j_list[ji]);
      row.eps_lower_bound = noma_outage_lower_bound(eta_s, p);
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace mudgain

#endif  // MUDGAIN_MONTECARLO_HPP
