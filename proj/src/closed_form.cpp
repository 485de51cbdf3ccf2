#include "lucas/closed_form.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace lucas {

namespace {

const double kLogMaxDouble = std::log(std::numeric_limits<double>::max());

// log(exp(x) - 1) for x > 0 without overflow.
double log_expm1(double x) {
  return x > 30.0 ? x + std::log1p(-std::exp(-x)) : std::log(std::expm1(x));
}

// log(1 - exp(x)) for x < 0.
double log_one_minus_exp(double x) { return std::log(-std::expm1(x)); }

double exp_checked(double log_value, const char* what) {
  if (log_value > kLogMaxDouble) {
    throw std::overflow_error(std::string(what) + " exceeds double range (log value " +
                              std::to_string(log_value) + ")");
  }
  return std::exp(log_value);
}

void require_positive_count(std::int64_t n, const char* name) {
  if (n < 1) throw std::invalid_argument(std::string(name) + " must be >= 1");
}

}  // namespace

NoEquilibriumError::NoEquilibriumError(double margin)
    : std::domain_error("no equilibrium: existence restriction k + e < 0 violated (k + e = " +
                        std::to_string(margin) + ")"),
      margin_(margin) {}

PriceCoefficients coefficients(const Preferences& prefs, const GrowthProcess& proc) {
  const double one_minus_alpha = 1.0 - prefs.alpha();
  const double rho = proc.rho();
  const double s2 = proc.sigma2_eps();

  PriceCoefficients co;
  co.k = std::log(prefs.beta()) + one_minus_alpha * proc.mu_x() +
         0.5 * one_minus_alpha * one_minus_alpha * s2;
  co.e = 0.5 * one_minus_alpha * one_minus_alpha * (rho * rho + 2.0 * rho) * s2;
  co.b = one_minus_alpha * rho + 0.0;  // no negative zero
  co.margin = co.k + co.e;
  if (co.margin < 0.0) {
    co.a = std::exp(co.k) / -std::expm1(co.margin);
  }
  return co;
}

double existence_margin(const Preferences& prefs, const GrowthProcess& proc) {
  const double one_minus_alpha = 1.0 - prefs.alpha();
  const double one_plus_rho = 1.0 + proc.rho();
  return std::log(prefs.beta()) + one_minus_alpha * proc.mu_x() +
         0.5 * one_minus_alpha * one_minus_alpha * proc.sigma2_eps() * one_plus_rho *
             one_plus_rho;
}

bool equilibrium_exists(const Preferences& prefs, const GrowthProcess& proc) {
  return existence_margin(prefs, proc) < 0.0;
}

double beta_prime(double alpha, const GrowthProcess& proc) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("alpha must be finite and > 0");
  }
  const double one_minus_alpha = 1.0 - alpha;
  const double rho = proc.rho();
  const double s2x = observed_variance(proc);
  const double sq = one_minus_alpha * one_minus_alpha * s2x;
  return std::exp(-one_minus_alpha * proc.mu_x() - 0.5 * sq) *
         std::exp(-rho * sq / (1.0 + rho * rho));
}

double equilibrium_price(const PriceCoefficients& co, const EconomyState& state) {
  return price_dividend_ratio(co, state.eps()) * state.c();
}

double price_dividend_ratio(const PriceCoefficients& co, double eps) {
  if (!co.a) throw NoEquilibriumError(co.margin);
  return *co.a * std::exp(co.b * eps);
}

double log_series_term(std::int64_t i, const Preferences& prefs, const GrowthProcess& proc,
                       double eps) {
  require_positive_count(i, "series index");
  const PriceCoefficients co = coefficients(prefs, proc);
  return co.k + static_cast<double>(i - 1) * co.margin + co.b * eps;
}

double series_term(std::int64_t i, const Preferences& prefs, const GrowthProcess& proc,
                   double eps) {
  return exp_checked(log_series_term(i, prefs, proc, eps), "series term");
}

double log_partial_sum(std::int64_t n, const Preferences& prefs, const GrowthProcess& proc,
                       double eps) {
  require_positive_count(n, "number of terms");
  const PriceCoefficients co = coefficients(prefs, proc);
  const double head = co.k + co.b * eps;
  const double m = co.margin;
  const double nd = static_cast<double>(n);
  if (m == 0.0) return head + std::log(nd);
  if (m < 0.0) return head + log_one_minus_exp(nd * m) - log_one_minus_exp(m);
  return head + log_expm1(nd * m) - log_expm1(m);
}

double partial_sum(std::int64_t n, const Preferences& prefs, const GrowthProcess& proc,
                   double eps) {
  return exp_checked(log_partial_sum(n, prefs, proc, eps), "partial sum");
}

double frontier_peak_alpha(const GrowthProcess& proc) {
  const double s2x = observed_variance(proc);
  const double rho = proc.rho();
  if (s2x == 0.0) throw std::domain_error("frontier peak undefined for zero variance");
  if (rho == -1.0) throw std::domain_error("frontier peak undefined for rho = -1");
  const double one_plus_rho = 1.0 + rho;
  const double peak =
      1.0 + proc.mu_x() * (1.0 + rho * rho) / (s2x * one_plus_rho * one_plus_rho);
  if (!(peak > 0.0)) {
    throw std::domain_error("frontier has no interior maximum on alpha > 0");
  }
  return peak;
}

std::optional<double> max_alpha_given_beta(double beta, const GrowthProcess& proc) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("beta must be finite and > 0");
  }
  double lo = frontier_peak_alpha(proc);
  if (beta > beta_prime(lo, proc)) return std::nullopt;
  double hi = kMaxAlphaSearchCap;
  if (lo >= hi || beta_prime(hi, proc) >= beta) {
    throw std::range_error("frontier stays above beta up to the alpha search cap");
  }
  // beta_prime(lo) >= beta > beta_prime(hi)
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (beta_prime(mid, proc) >= beta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace lucas
