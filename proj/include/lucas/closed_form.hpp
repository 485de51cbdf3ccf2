#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "lucas/model.hpp"

namespace lucas {

/// Coefficients of the equilibrium price p_t = a * exp(b * eps_t) * c_t.
///
/// `margin` is k + e, the log of the ratio between successive expected
/// discounted dividends. The price-dividend scale `a` exists only when the
/// margin is strictly negative; otherwise the dividend series diverges and
/// there is no equilibrium price.
struct PriceCoefficients {
  double k = 0.0;
  double e = 0.0;
  double b = 0.0;
  std::optional<double> a;
  double margin = 0.0;
};

/// Raised when a price is requested for parameters with no equilibrium.
class NoEquilibriumError : public std::domain_error {
public:
  explicit NoEquilibriumError(double margin);
  double margin() const noexcept { return margin_; }

private:
  double margin_;
};

PriceCoefficients coefficients(const Preferences& prefs, const GrowthProcess& proc);

/// k + e = ln(beta) + (1-alpha) mu_x + (1-alpha)^2 sigma2_eps (1+rho)^2 / 2.
double existence_margin(const Preferences& prefs, const GrowthProcess& proc);

/// True iff existence_margin < 0 (strict, no tolerance band).
bool equilibrium_exists(const Preferences& prefs, const GrowthProcess& proc);

/// Largest discount factor compatible with equilibrium at this risk aversion.
/// May exceed one.
double beta_prime(double alpha, const GrowthProcess& proc);

double equilibrium_price(const PriceCoefficients& co, const EconomyState& state);
double price_dividend_ratio(const PriceCoefficients& co, double eps);

/// Log of the i-th expected discounted dividend per unit of current
/// consumption, k + (i-1)(k+e) + b*eps. Finite for every i >= 1.
double log_series_term(std::int64_t i, const Preferences& prefs, const GrowthProcess& proc,
                       double eps);
/// exp(log_series_term). Throws std::overflow_error if the value is not representable.
double series_term(std::int64_t i, const Preferences& prefs, const GrowthProcess& proc,
                   double eps);

/// Log of the first n terms of the discounted-dividend series, evaluated
/// through the closed geometric form. Finite for any margin and any n >= 1.
double log_partial_sum(std::int64_t n, const Preferences& prefs, const GrowthProcess& proc,
                       double eps);
/// exp(log_partial_sum). Throws std::overflow_error when the partial sum
/// exceeds the double range, which can only happen on a diverging series.
double partial_sum(std::int64_t n, const Preferences& prefs, const GrowthProcess& proc,
                   double eps);

/// Maximizer of beta_prime over alpha > 0: 1 + mu_x (1+rho^2) / (sigma2_x (1+rho)^2).
/// Throws std::domain_error when sigma2_x = 0, rho = -1, or the stationary
/// point is not positive.
double frontier_peak_alpha(const GrowthProcess& proc);

/// Upper bound of the risk-aversion search in max_alpha_given_beta.
inline constexpr double kMaxAlphaSearchCap = 1e4;

/// Largest alpha on the decreasing branch (alpha >= peak) with
/// beta_prime(alpha) >= beta, to 1e-9 absolute. Empty when beta exceeds the
/// frontier peak. Throws std::range_error if the frontier is still above beta
/// at kMaxAlphaSearchCap.
std::optional<double> max_alpha_given_beta(double beta, const GrowthProcess& proc);

}  // namespace lucas
