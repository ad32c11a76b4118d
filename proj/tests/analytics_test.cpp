#include <mudgain/analytics.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

namespace {

using namespace mudgain;

// Reference values below were evaluated independently at 40 significant
// digits (mpmath) directly from the closed forms, not from this library.
constexpr double kOmaPower3 = 696.494137313955;
constexpr double kOmaPower3Db = 28.4291746513484;
constexpr double kOmaPower6 = 6268.4472358256;
constexpr double kOmaPower6Db = 37.9715997457416;
constexpr double kNomaBound3 = 206.902691809585;
constexpr double kNomaBound3Db = 23.1576614088538;
constexpr double kNomaBound6 = 413.805383619171;
constexpr double kNomaBound6Db = 26.1679613654936;
constexpr double kGainBound3 = 5.27151324249456;
constexpr double kGainBound6 = 11.803638380248;

const std::vector<double>& eta_grid() {
  static const std::vector<double> g{0.5, 1, 1.5, 2, 3, 4, 5, 6, 7, 8, 9};
  return g;
}
const std::vector<double>& eps_grid() {
  static const std::vector<double> g{1e-4, 1e-3, 5e-3, 0.01, 0.05, 0.1, 0.2, 0.5};
  return g;
}

TEST(OmaOutageTest, Examples) {
  EXPECT_NEAR(oma_outage(3, 696.494), 0.01, 1e-6);
  EXPECT_NEAR(oma_outage(3, 100), 0.0676061800940518, 1e-12);
  double prev = 1.0;
  for (double p = 10; p < 1e12; p *= 10) {
    const double e = oma_outage(3, p);
    EXPECT_LT(e, prev);
    prev = e;
  }
  EXPECT_LT(prev, 1e-9);
}

TEST(OmaOutageTest, DomainErrors) {
  EXPECT_THROW(oma_outage(0, 10), std::domain_error);
  EXPECT_THROW(oma_outage(3, 0), std::domain_error);
  EXPECT_THROW(oma_outage(3, -1), std::domain_error);
}

TEST(OmaRequiredPowerTest, MatchesReference) {
  EXPECT_NEAR(oma_required_power(3, 0.01), kOmaPower3, 1e-9);
  EXPECT_NEAR(to_db(oma_required_power(3, 0.01)), kOmaPower3Db, 1e-10);
  EXPECT_NEAR(oma_required_power(6, 0.01), kOmaPower6, 1e-8);
  EXPECT_NEAR(to_db(oma_required_power(6, 0.01)), kOmaPower6Db, 1e-10);
  EXPECT_THROW(oma_required_power(3, 0.0), std::domain_error);
  EXPECT_THROW(oma_required_power(3, 1.0), std::domain_error);
}

TEST(NomaBoundTest, MatchesReference) {
  EXPECT_NEAR(noma_power_lower_bound(3, 0.01), kNomaBound3, 1e-9);
  EXPECT_NEAR(to_db(noma_power_lower_bound(3, 0.01)), kNomaBound3Db, 1e-10);
  EXPECT_NEAR(noma_power_lower_bound(6, 0.01), kNomaBound6, 1e-9);
  EXPECT_NEAR(to_db(noma_power_lower_bound(6, 0.01)), kNomaBound6Db, 1e-10);
  EXPECT_NEAR(noma_outage_lower_bound(3, 206.892), 0.01, 1e-6);
  EXPECT_NEAR(noma_outage_lower_bound(6, 413.784), 0.01, 1e-6);
  EXPECT_LT(noma_outage_lower_bound(3, 1e15), 1e-13);
  EXPECT_THROW(noma_power_lower_bound(3, 1.5), std::domain_error);
  EXPECT_THROW(noma_outage_lower_bound(-3, 1), std::domain_error);
}

TEST(MudGainTest, Examples) {
  EXPECT_DOUBLE_EQ(mud_gain(28.43, 28.43), 0.0);
  EXPECT_NEAR(mud_gain(28.4294, 23.1573), 5.2721, 1e-12);
  EXPECT_NEAR(mud_gain(37.9720, 26.1677), 11.8043, 1e-12);
}

TEST(MudGainUpperBoundTest, MatchesReferenceAndComposition) {
  EXPECT_NEAR(mud_gain_upper_bound(3, 0.01), kGainBound3, 1e-10);
  EXPECT_NEAR(mud_gain_upper_bound(6, 0.01), kGainBound6, 1e-10);
  for (double eta : eta_grid()) {
    for (double eps : eps_grid()) {
      const double composed = mud_gain(to_db(oma_required_power(eta, eps)),
                                       to_db(noma_power_lower_bound(eta, eps)));
      EXPECT_NEAR(mud_gain_upper_bound(eta, eps), composed, 1e-12);
      // The eps terms cancel: 10 log10((2^eta - 1) / (eta ln2)).
      const double simplified =
          10.0 * std::log10(std::expm1(eta * std::numbers::ln2) / (eta * std::numbers::ln2));
      EXPECT_NEAR(mud_gain_upper_bound(eta, eps), simplified, 1e-9);
    }
  }
}

TEST(AnalyticsProperties, InverseRoundTrips) {
  for (double eta : eta_grid()) {
    for (double eps : eps_grid()) {
      const double a = oma_outage(eta, oma_required_power(eta, eps));
      const double b = noma_outage_lower_bound(eta, noma_power_lower_bound(eta, eps));
      EXPECT_NEAR(a, eps, 1e-12 * eps) << "eta=" << eta << " eps=" << eps;
      EXPECT_NEAR(b, eps, 1e-12 * eps) << "eta=" << eta << " eps=" << eps;
    }
  }
}

TEST(AnalyticsProperties, Monotonicity) {
  for (double eta : eta_grid()) {
    // Strict once the value has left 1.0; before that it rounds to 1.
    double prev_oma = 1.0 + 1e-9;
    double prev_lb = 1.0 + 1e-9;
    for (double p = 0.5; p < 1e7; p *= 1.7) {
      if (prev_oma < 1.0) EXPECT_LT(oma_outage(eta, p), prev_oma);
      else EXPECT_LE(oma_outage(eta, p), prev_oma);
      if (prev_lb < 1.0) EXPECT_LT(noma_outage_lower_bound(eta, p), prev_lb);
      else EXPECT_LE(noma_outage_lower_bound(eta, p), prev_lb);
      prev_oma = oma_outage(eta, p);
      prev_lb = noma_outage_lower_bound(eta, p);
    }
    double prev = 0.0;
    for (double eps : {0.5, 0.2, 0.1, 0.05, 0.01, 1e-3, 1e-4}) {
      EXPECT_GT(oma_required_power(eta, eps), prev);
      prev = oma_required_power(eta, eps);
    }
  }
  for (double eps : eps_grid()) {
    double prev_power = 0.0;
    double prev_gain = -1.0;
    for (double eta : eta_grid()) {
      EXPECT_GT(oma_required_power(eta, eps), prev_power);
      EXPECT_GT(mud_gain_upper_bound(eta, eps), 0.0);
      EXPECT_GT(mud_gain_upper_bound(eta, eps), prev_gain);
      prev_power = oma_required_power(eta, eps);
      prev_gain = mud_gain_upper_bound(eta, eps);
    }
  }
}

TEST(SingleUserThresholdTest, Examples) {
  EXPECT_NEAR(single_user_threshold(3, 1, 100), std::expm1(3 * std::numbers::ln2) / 100, 1e-15);
  EXPECT_NEAR(single_user_threshold(3, 2, 100), 0.0365685424949238, 1e-14);
  EXPECT_DOUBLE_EQ(threshold_limit(3, 100), 3 * std::numbers::ln2 / 100);
  EXPECT_THROW(single_user_threshold(3, 0, 100), std::domain_error);
}

TEST(SingleUserThresholdTest, DecreasesTowardLimit) {
  for (double eta : {0.5, 3.0, 6.0, 9.0}) {
    for (double p : {1.0, 100.0, 5000.0}) {
      const double limit = threshold_limit(eta, p);
      double prev = single_user_threshold(eta, 1, p);
      for (unsigned k = 2; k <= (1u << 20); k *= 2) {
        const double t = single_user_threshold(eta, k, p);
        EXPECT_LT(t, prev);
        EXPECT_GT(t, limit);
        prev = t;
      }
      // Remaining gap is the first-order term (eta ln2)^2 / (2 p K).
      const double k = double(1u << 20);
      const double a = eta * std::numbers::ln2;
      EXPECT_NEAR((prev - limit) * k, a * a / (2 * p), 1e-5 * a * a / (2 * p));
    }
  }
}

TEST(ThresholdTaylorTest, Examples) {
  // (3 ln2 + (3 ln2)^2 / 200) / 100
  EXPECT_NEAR(threshold_taylor_first_order(3, 100, 100), 0.0210106192730615, 1e-14);
  EXPECT_NEAR(threshold_taylor_first_order(3, 1u << 31, 100), threshold_limit(3, 100), 1e-10);
  const double exact = single_user_threshold(3, 1000, 100);
  EXPECT_LT(std::abs(exact - threshold_taylor_first_order(3, 1000, 100)), 1e-5 * exact);
}

TEST(ThresholdTaylorTest, ErrorIsLittleOOfOneOverK) {
  // K * |exact - approx| must vanish as K grows.
  double prev = 1.0;
  for (unsigned k = 4; k <= (1u << 16); k *= 4) {
    const double scaled =
        k * std::abs(single_user_threshold(6, k, 50) - threshold_taylor_first_order(6, k, 50));
    EXPECT_LT(scaled, prev);
    prev = scaled;
  }
  EXPECT_LT(prev, 1e-4);
}

}  // namespace
