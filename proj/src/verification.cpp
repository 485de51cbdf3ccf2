#include "lucas/verification.hpp"

#include <cmath>
#include <algorithm>

#include <fmt/format.h>

#include "lucas/closed_form.hpp"
#include "lucas/rng.hpp"

namespace lucas {

std::vector<ValidationPoint> validation_grid() {
  return {
      {0.95, 2.0, 0.0}, {0.9, 5.0, 0.5}, {0.97, 10.0, -0.15}, {0.3, 55.0, 0.0}, {0.95, 1.0, 0.0},
  };
}

EconomyState oracle_state(const GrowthProcess& proc) {
  return EconomyState(1.0, std::sqrt(proc.sigma2_eps()));
}

EconomyState control_state(const GrowthProcess& proc) {
  return EconomyState(1.0, kControlStateSigmas * std::sqrt(proc.sigma2_eps()));
}

bool within_band(const McEstimate& est, double expected, double n_se) noexcept {
  const double floor = 1e-12 * std::max(1.0, std::abs(expected));
  return std::abs(est.mean - expected) <= n_se * est.std_error + floor;
}

std::vector<OracleCheck> run_oracle_suite(const OracleSuiteConfig& cfg) {
  std::vector<OracleCheck> checks;
  const auto grid = validation_grid();

  for (std::size_t p = 0; p < grid.size(); ++p) {
    const ValidationPoint& vp = grid[p];
    const Preferences prefs = vp.preferences();
    const GrowthProcess proc = vp.process();
    const EconomyState state = oracle_state(proc);
    const std::string label =
        fmt::format("beta={:g} alpha={:g} rho={:g}", vp.beta, vp.alpha, vp.rho);

    std::uint64_t slot = 0;
    auto sim = [&] {
      SimConfig sc;
      sc.n_paths = cfg.n_paths;
      sc.horizon = 1;
      sc.master_seed = substream_seed(cfg.master_seed, p * 16 + slot++);
      sc.workers = cfg.workers;
      return sc;
    };
    auto record = [&](std::string name, const McEstimate& est, double expected, bool passed) {
      checks.push_back({std::move(name), label, est.mean, expected, est.std_error,
                        est.z_score(expected), passed});
    };

    const McEstimate euler = euler_residual_mc(prefs, proc, state, sim());
    record("euler_residual", euler, 0.0, within_band(euler, 0.0));

    PriceCoefficients wrong = coefficients(prefs, proc);
    wrong.b += kControlLoadingShift;
    const McEstimate control = euler_residual_mc(prefs, proc, wrong, control_state(proc), sim());
    record("euler_control_rejects_perturbed_b", control, 0.0,
           std::abs(control.mean) > 5.0 * control.std_error);

    for (const std::int64_t i : {1, 2, 5}) {
      const McEstimate est = series_term_mc(i, prefs, proc, state, sim());
      const double analytic = series_term(i, prefs, proc, state.eps());
      record(fmt::format("series_term_{}", i), est, analytic, within_band(est, analytic));
    }

    if (vp.rho == 0.0) {
      const McEstimate prem = empirical_premium_mc(prefs, proc, sim());
      const double expected = prefs.alpha() * observed_variance(proc);
      record("empirical_premium", prem, expected, within_band(prem, expected));
    }

    const PriceCoefficients co = coefficients(prefs, proc);
    const double limit = price_dividend_ratio(co, state.eps());
    const double sum = partial_sum(1000, prefs, proc, state.eps());
    McEstimate exact{sum, 0.0, 1000};
    record("partial_sum_1000", exact, limit, std::abs(sum / limit - 1.0) <= 1e-10);
  }
  return checks;
}

}  // namespace lucas
