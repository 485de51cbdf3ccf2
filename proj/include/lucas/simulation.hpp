#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lucas/closed_form.hpp"
#include "lucas/model.hpp"

namespace lucas {

/// Monte Carlo run settings.
///
/// Path simulation uses `n_paths` paths of `horizon` periods. The conditional
/// oracles (Euler residual, series terms) draw `n_paths` independent
/// continuations from the given state and ignore `horizon`.
/// `workers` = 0 picks the hardware concurrency; results never depend on it.
struct SimConfig {
  std::int64_t n_paths = 1;
  std::int64_t horizon = 1;
  std::uint64_t master_seed = 0;
  bool stationary_start = true;  // eps_0 ~ N(0, sigma2_eps), else eps_0 = 0
  unsigned workers = 0;

  void validate() const;
};

/// One simulated path. innovations and consumptions have horizon + 1 entries
/// (t = 0..T); growths has horizon entries (x_1..x_T). c_0 = 1.
struct PathSample {
  std::vector<double> innovations;
  std::vector<double> growths;
  std::vector<double> consumptions;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n = 0;

  /// (mean - target) / std_error; 0 when both the error and the gap are 0.
  double z_score(double target) const noexcept;
};

/// Path `index` of the run; identical to element `index` of simulate_growth_paths.
PathSample simulate_path(const GrowthProcess& proc, const SimConfig& cfg, std::int64_t index);

std::vector<PathSample> simulate_growth_paths(const GrowthProcess& proc, const SimConfig& cfg);

/// p_t = a exp(b eps_t) c_t along the path.
std::vector<double> price_path(const PriceCoefficients& co, const PathSample& path);

/// R_{t+1} = (p_{t+1} + c_{t+1}) / p_t.
std::vector<double> realized_returns(std::span<const double> prices,
                                     std::span<const double> consumptions);

/// Estimates E_t[beta (c'/c)^(-alpha) (p' + c')] / p_t - 1 by one-step
/// simulation from `state`, with prices from `co`. Zero in expectation when
/// `co` solves the pricing recursion.
McEstimate euler_residual_mc(const Preferences& prefs, const GrowthProcess& proc,
                             const PriceCoefficients& co, const EconomyState& state,
                             const SimConfig& cfg);
/// As above with the closed-form coefficients of (prefs, proc).
McEstimate euler_residual_mc(const Preferences& prefs, const GrowthProcess& proc,
                             const EconomyState& state, const SimConfig& cfg);

/// Estimates E_t[beta^i (c_{t+i}/c_t)^(1-alpha)] from state.eps.
McEstimate series_term_mc(std::int64_t i, const Preferences& prefs, const GrowthProcess& proc,
                          const EconomyState& state, const SimConfig& cfg);

/// ln(mean realized gross equity return) + ln(mean pricing kernel), i.e. the
/// log premium over a risk-free rate that is itself estimated from the draws.
/// Standard error by the delta method. Requires rho = 0 and an equilibrium.
McEstimate empirical_premium_mc(const Preferences& prefs, const GrowthProcess& proc,
                                const SimConfig& cfg);

/// Pooled statistics over a set of simulated paths.
struct PathSummary {
  std::int64_t n_paths = 0;
  std::int64_t horizon = 0;
  double mean_growth = 0.0;
  double growth_variance = 0.0;
  std::optional<double> lag1_autocorr;  // needs horizon >= 2
  std::optional<double> lag2_autocorr;  // needs horizon >= 3
  std::optional<double> mean_price_dividend;
  std::optional<double> mean_gross_return;
};

/// Growth moments use the pooled mean; autocorrelations pool lagged products
/// within paths. Price statistics are filled when `co` is given and has a price.
PathSummary summarize_paths(std::span<const PathSample> paths,
                            const PriceCoefficients* co = nullptr);

}  // namespace lucas
