#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "lucas/closed_form.hpp"
#include "oracles.hpp"

using namespace lucas;
using doctest::Approx;

namespace {

const GrowthProcess kIid = default_calibration(0.0);
const GrowthProcess kPositive = default_calibration(0.5);
const GrowthProcess kNegative = default_calibration(-0.15);

double rel_err(double got, double want) { return std::abs(got / want - 1.0); }

// Random draws over the parameter region the tests sweep.
struct ParamSampler {
  std::mt19937_64 rng;
  std::uniform_real_distribution<double> alpha{0.05, 80.0};
  std::uniform_real_distribution<double> beta{0.05, 1.5};
  std::uniform_real_distribution<double> mu{-0.05, 0.08};
  std::uniform_real_distribution<double> s2x{0.0, 0.01};
  std::uniform_real_distribution<double> rho{-0.95, 0.95};

  explicit ParamSampler(std::uint64_t seed) : rng(seed) {}
  Preferences prefs() { return Preferences(alpha(rng), beta(rng)); }
  GrowthProcess proc() { return GrowthProcess::from_observed(mu(rng), s2x(rng), rho(rng)); }
};

}  // namespace

TEST_CASE("coefficients: iid and log-utility anchors") {
  for (const double alpha : {0.5, 2.0, 30.0}) {
    const PriceCoefficients co = coefficients(Preferences(alpha, 0.9), kIid);
    CHECK(co.e == 0.0);
    CHECK(co.b == 0.0);
  }

  const PriceCoefficients log_utility = coefficients(Preferences(1.0, 0.95), kPositive);
  CHECK(log_utility.k == std::log(0.95));
  CHECK(log_utility.e == 0.0);
  CHECK(log_utility.b == 0.0);
  REQUIRE(log_utility.a.has_value());
  CHECK(std::abs(*log_utility.a - 19.0) <= 1e-12);
}

TEST_CASE("coefficients at beta = 0.9, alpha = 30, iid") {
  const Preferences prefs(30.0, 0.9);
  const PriceCoefficients co = coefficients(prefs, kIid);
  CHECK(co.k == Approx(-0.0785355156578263).epsilon(1e-13));
  REQUIRE(co.a.has_value());
  // Positive and finite; far from the -1.033 quoted for these parameters.
  CHECK(*co.a == Approx(12.2396366394578).epsilon(1e-12));
  // The scale is the limit of the discounted-dividend series.
  const double series = oracle::brute_force_partial_sum(2000, 30.0, 0.9, kIid, 0.0);
  CHECK(rel_err(*co.a, series) < 1e-12);
}

TEST_CASE("coefficients: structural invariants") {
  ParamSampler s(17);
  for (int i = 0; i < 10000; ++i) {
    const Preferences prefs = s.prefs();
    const GrowthProcess proc = s.proc();
    const PriceCoefficients co = coefficients(prefs, proc);
    CHECK(co.b == (1.0 - prefs.alpha()) * proc.rho());
    CHECK(co.margin == co.k + co.e);
    CHECK(co.a.has_value() == (co.margin < 0.0));
    if (co.a) {
      CHECK(*co.a > 0.0);
      CHECK(rel_err(*co.a, std::exp(co.k) / (1.0 - std::exp(co.margin))) < 1e-9);
    }
    CHECK(std::abs(existence_margin(prefs, proc) - co.margin) <=
          1e-14 * std::max(1.0, std::abs(co.k) + std::abs(co.e)));
  }
}

TEST_CASE("pricing recursion holds at the closed-form coefficients") {
  ParamSampler s(23);
  std::normal_distribution<double> eps(0.0, 0.2);
  int checked = 0;
  while (checked < 2000) {
    const Preferences prefs = s.prefs();
    const GrowthProcess proc = s.proc();
    const PriceCoefficients co = coefficients(prefs, proc);
    if (!co.a) continue;
    const double a = *co.a;
    const double e_t = eps(s.rng);
    const double lhs = a * std::exp(co.b * e_t);
    const double rhs = std::exp(co.k) * (1.0 + a * std::exp(co.e)) *
                       std::exp((1.0 - prefs.alpha()) * proc.rho() * e_t);
    CHECK(rel_err(lhs, rhs) <= 1e-12);
    ++checked;
  }
}

TEST_CASE("existence_margin examples") {
  CHECK(existence_margin(Preferences(1.0, 0.95), kPositive) == std::log(0.95));
  CHECK(existence_margin(Preferences(30.0, 0.9), kIid) ==
        Approx(-0.0785355156578263).epsilon(1e-13));
  const double boundary_beta = beta_prime(55.0, kIid);
  CHECK(std::abs(existence_margin(Preferences(55.0, boundary_beta), kIid)) <= 1e-12);
}

TEST_CASE("equilibrium_exists examples") {
  CHECK_FALSE(equilibrium_exists(Preferences(55.0, 0.5), kIid));
  CHECK(equilibrium_exists(Preferences(55.0, 0.3), kIid));
  CHECK(equilibrium_exists(Preferences(30.0, 0.9), kIid));
}

TEST_CASE("existence via margin and via beta_prime agree") {
  ParamSampler s(31);
  for (int i = 0; i < 20000; ++i) {
    const Preferences prefs = s.prefs();
    const GrowthProcess proc = s.proc();
    CHECK(equilibrium_exists(prefs, proc) == (prefs.beta() < beta_prime(prefs.alpha(), proc)));
  }
}

TEST_CASE("beta_prime values") {
  CHECK(beta_prime(55.0, kIid) == Approx(0.409139133942170).epsilon(1e-12));
  CHECK(beta_prime(55.0, kPositive) == Approx(0.0952071723701643).epsilon(1e-12));
  CHECK(beta_prime(55.0, kNegative) == Approx(0.698387499354324).epsilon(1e-12));
  for (const double rho : {-0.9, -0.15, 0.0, 0.5, 3.0}) {
    CHECK(std::abs(beta_prime(1.0, default_calibration(rho)) - 1.0) <= 1e-12);
  }
  CHECK_THROWS_AS(beta_prime(0.0, kIid), std::invalid_argument);
}

TEST_CASE("beta_prime equals the root of the coefficient margin in beta") {
  ParamSampler s(37);
  for (int i = 0; i < 300; ++i) {
    const double alpha = s.alpha(s.rng);
    const GrowthProcess proc = s.proc();
    const double bp = beta_prime(alpha, proc);
    const double root = oracle::bisect(
        [&](double log_beta) {
          return coefficients(Preferences(alpha, std::exp(log_beta)), proc).margin;
        },
        -300.0, 300.0);
    CHECK(rel_err(bp, std::exp(root)) < 1e-10);
  }
}

TEST_CASE("beta_prime falls as rho rises") {
  CHECK(beta_prime(55.0, kPositive) < beta_prime(55.0, kIid));
  CHECK(beta_prime(55.0, kIid) < beta_prime(55.0, kNegative));

  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> alpha(0.1, 80.0), rho(-0.99, 0.99);
  for (int i = 0; i < 5000; ++i) {
    const double a = alpha(rng);
    if (std::abs(a - 1.0) < 1e-3) continue;
    double r1 = rho(rng), r2 = rho(rng);
    if (r1 == r2) continue;
    if (r1 > r2) std::swap(r1, r2);
    CHECK(beta_prime(a, default_calibration(r2)) < beta_prime(a, default_calibration(r1)));
  }
}

TEST_CASE("beta_prime depends on the observable variance and rho, not on sigma2 alone") {
  for (const double rho : {-0.15, 0.5, 0.9}) {
    const double s2 = innovation_variance_from_observed(0.00125, rho);
    const GrowthProcess via_innovation(0.0172, s2, rho);
    const GrowthProcess via_observed = GrowthProcess::from_observed(0.0172, 0.00125, rho);
    CHECK(beta_prime(55.0, via_innovation) == beta_prime(55.0, via_observed));
    // Reading 0.00125 as the innovation variance is a different economy.
    CHECK(beta_prime(55.0, GrowthProcess(0.0172, 0.00125, rho)) != beta_prime(55.0, via_observed));
  }
}

TEST_CASE("equilibrium_price and price_dividend_ratio") {
  const PriceCoefficients log_utility = coefficients(Preferences(1.0, 0.95), kIid);
  CHECK(equilibrium_price(log_utility, EconomyState(1.0, 0.0)) == *log_utility.a);
  CHECK(equilibrium_price(log_utility, EconomyState(1.0, 0.7)) == *log_utility.a);
  CHECK(equilibrium_price(log_utility, EconomyState(2.0, 0.0)) == Approx(38.0).epsilon(1e-12));

  PriceCoefficients co;
  co.a = 12.2398;
  co.b = 0.0;
  CHECK(price_dividend_ratio(co, 0.0) == 12.2398);
  CHECK(price_dividend_ratio(co, 1.7) == 12.2398);
  co.a = 1.0;
  co.b = -2.0;
  CHECK(price_dividend_ratio(co, 0.5) == Approx(0.367879441171442).epsilon(1e-14));
  CHECK(equilibrium_price(co, EconomyState(3.0, 0.5)) == 3.0 * price_dividend_ratio(co, 0.5));

  const PriceCoefficients none = coefficients(Preferences(55.0, 0.9), kIid);
  REQUIRE_FALSE(none.a.has_value());
  try {
    (void)equilibrium_price(none, EconomyState(1.0, 0.0));
    FAIL("expected NoEquilibriumError");
  } catch (const NoEquilibriumError& e) {
    CHECK(e.margin() == none.margin);
    CHECK(e.margin() > 0.0);
  }
}

TEST_CASE("series_term") {
  const Preferences prefs(2.0, 0.95);
  const PriceCoefficients co = coefficients(prefs, kPositive);
  CHECK(series_term(1, prefs, kPositive, 0.0) == Approx(std::exp(co.k)).epsilon(1e-15));

  const GrowthProcess deterministic(0.0172, 0.0, 0.4);
  for (const std::int64_t i : {1, 2, 7, 40}) {
    const double want = std::pow(0.95, double(i)) * std::exp(-1.0 * double(i) * 0.0172);
    CHECK(rel_err(series_term(i, prefs, deterministic, 0.0), want) < 1e-13);
  }
  CHECK_THROWS_AS(series_term(0, prefs, kIid, 0.0), std::invalid_argument);
}

TEST_CASE("series_term: geometric ratio and independent moment formula") {
  ParamSampler s(43);
  std::normal_distribution<double> eps(0.0, 0.05);
  for (int n = 0; n < 2000; ++n) {
    const Preferences prefs = s.prefs();
    const GrowthProcess proc = s.proc();
    const double e_t = eps(s.rng);
    const double margin = coefficients(prefs, proc).margin;
    for (const std::int64_t i : {1, 2, 5, 30}) {
      const double log_term = log_series_term(i, prefs, proc, e_t);
      const double log_next = log_series_term(i + 1, prefs, proc, e_t);
      CHECK(std::abs((log_next - log_term) - margin) < 1e-12 * std::max(1.0, std::abs(margin)));
      const double ref =
          oracle::log_expected_discounted_dividend(i, prefs.alpha(), prefs.beta(), proc, e_t);
      CHECK(std::abs(log_term - ref) < 1e-11 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("series_term stays finite in log space and reports overflow") {
  const Preferences prefs(55.0, 0.9);  // margin ~ +0.79
  const double log_term = log_series_term(1'000'000, prefs, kIid, 0.0);
  CHECK(std::isfinite(log_term));
  CHECK(log_term > 7e5);
  CHECK_THROWS_AS(series_term(1'000'000, prefs, kIid, 0.0), std::overflow_error);
}

TEST_CASE("partial_sum matches the literal term-by-term sum") {
  struct Case {
    double alpha, beta;
    GrowthProcess proc;
    double eps;
  };
  const Case cases[] = {
      {2.0, 0.95, kIid, 0.0},       {5.0, 0.9, kPositive, 0.02},
      {10.0, 0.97, kNegative, -0.03}, {55.0, 0.3, kIid, 0.0},
      {55.0, 0.5, kIid, 0.0},       {3.0, 1.2, kPositive, 0.01},
  };
  for (const auto& c : cases) {
    const Preferences prefs(c.alpha, c.beta);
    for (const std::int64_t n : {1, 10, 100, 1000}) {
      const double want = oracle::brute_force_partial_sum(n, c.alpha, c.beta, c.proc, c.eps);
      if (!std::isfinite(want)) continue;
      CHECK(rel_err(partial_sum(n, prefs, c.proc, c.eps), want) < 1e-11);
    }
    CHECK(partial_sum(1, prefs, c.proc, c.eps) == Approx(series_term(1, prefs, c.proc, c.eps)));
  }
}

TEST_CASE("partial_sum with zero margin grows linearly") {
  const Preferences prefs(1.0, 1.0);
  CHECK(coefficients(prefs, kIid).margin == 0.0);
  for (const std::int64_t n : {1, 10, 12345}) {
    CHECK(partial_sum(n, prefs, kIid, 0.0) == Approx(double(n)).epsilon(1e-14));
  }
}

TEST_CASE("partial_sum converges to the price-dividend ratio with a geometric tail") {
  ParamSampler s(47);
  std::normal_distribution<double> eps(0.0, 0.05);
  int checked = 0;
  while (checked < 500) {
    const Preferences prefs = s.prefs();
    const GrowthProcess proc = s.proc();
    const PriceCoefficients co = coefficients(prefs, proc);
    if (!co.a || co.margin > -1e-3) continue;
    const double e_t = eps(s.rng);
    const double limit = price_dividend_ratio(co, e_t);
    for (const std::int64_t n : {10, 100, 1000}) {
      const double gap = std::abs(partial_sum(n, prefs, proc, e_t) / limit - 1.0);
      const double bound =
          std::exp(double(n) * co.margin) / (1.0 - std::exp(co.margin));
      CHECK(gap <= bound + 1e-13);
    }
    ++checked;
  }
}

TEST_CASE("partial_sum diverges without overflowing when the margin is positive") {
  const Preferences prefs(55.0, 0.9);
  double prev = partial_sum(1, prefs, kIid, 0.0);
  for (std::int64_t n = 2; n < 200; ++n) {
    const double cur = partial_sum(n, prefs, kIid, 0.0);
    CHECK(cur > prev);
    prev = cur;
  }
  const double huge = log_partial_sum(1'000'000'000'000, prefs, kIid, 0.0);
  CHECK(std::isfinite(huge));
  CHECK(huge > 1e11);
  CHECK_THROWS_AS(partial_sum(1'000'000, prefs, kIid, 0.0), std::overflow_error);
}

TEST_CASE("frontier_peak_alpha") {
  CHECK(frontier_peak_alpha(GrowthProcess::from_observed(0.0, 0.00125, 0.3)) == 1.0);
  CHECK(frontier_peak_alpha(kIid) == Approx(14.76).epsilon(1e-13));
  CHECK(frontier_peak_alpha(kPositive) == Approx(8.64444444444444).epsilon(1e-13));
  CHECK_THROWS_AS(frontier_peak_alpha(GrowthProcess(0.0172, 0.0, 0.0)), std::domain_error);
  CHECK_THROWS_AS(frontier_peak_alpha(GrowthProcess(0.0172, 0.001, -1.0)), std::domain_error);
  CHECK_THROWS_AS(frontier_peak_alpha(GrowthProcess::from_observed(-1.0, 0.00125, 0.0)),
                  std::domain_error);

  for (const GrowthProcess& p : {kIid, kPositive, kNegative}) {
    const double numeric =
        oracle::golden_max([&](double a) { return std::log(beta_prime(a, p)); }, 0.01, 200.0);
    CHECK(std::abs(frontier_peak_alpha(p) - numeric) < 1e-5);
  }
}

TEST_CASE("max_alpha_given_beta") {
  const auto iid = max_alpha_given_beta(0.409, kIid);
  REQUIRE(iid.has_value());
  CHECK(std::abs(*iid - 55.0) < 0.1);

  const auto positive = max_alpha_given_beta(0.095, kPositive);
  REQUIRE(positive.has_value());
  CHECK(std::abs(*positive - 55.0) < 0.1);

  CHECK_FALSE(max_alpha_given_beta(2.0, kIid).has_value());
  CHECK(beta_prime(frontier_peak_alpha(kIid), kIid) == Approx(1.12562225691366).epsilon(1e-12));

  // Frontier still above beta at the search cap.
  const GrowthProcess flat = GrowthProcess::from_observed(0.0172, 1e-5, 0.0);
  CHECK_THROWS_AS(max_alpha_given_beta(1e-200, flat), std::range_error);
  const GrowthProcess very_flat = GrowthProcess::from_observed(0.0172, 1e-7, 0.0);
  CHECK_THROWS_AS(max_alpha_given_beta(0.5, very_flat), std::range_error);

  for (const double beta : {0.05, 0.2, 0.6, 0.95, 1.1}) {
    const auto top = max_alpha_given_beta(beta, kNegative);
    REQUIRE(top.has_value());
    CHECK(*top >= frontier_peak_alpha(kNegative));
    CHECK(beta_prime(*top, kNegative) >= beta);
    CHECK(beta_prime(*top + 2e-9, kNegative) < beta);
  }
}
