#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lucas/model.hpp"
#include "lucas/simulation.hpp"

namespace lucas {

/// Parameter set of the oracle suite; mu_x and sigma2_x take the default calibration.
struct ValidationPoint {
  double beta = 0.0;
  double alpha = 0.0;
  double rho = 0.0;

  Preferences preferences() const { return Preferences(alpha, beta); }
  GrowthProcess process() const { return default_calibration(rho); }
};

/// The five fixed validation points.
std::vector<ValidationPoint> validation_grid();

/// State the conditional oracles start from: c = 1 and a one-standard-deviation
/// innovation, so that a wrong innovation loading moves today's price.
EconomyState oracle_state(const GrowthProcess& proc);

/// |mean - expected| <= n_se * std_error, plus a 1e-12 relative floor so that
/// zero-variance (deterministic) estimators are judged up to rounding.
bool within_band(const McEstimate& est, double expected, double n_se = 3.0) noexcept;

/// Perturbation applied to the innovation loading b in the falsification control.
inline constexpr double kControlLoadingShift = 0.1;

/// Innovation of the control state, in innovation standard deviations.
inline constexpr double kControlStateSigmas = 15.0;

/// State the falsification control starts from: c = 1 and an innovation of
/// kControlStateSigmas standard deviations. A loading error moves today's
/// price by exp(shift * eps), so the control needs a state with leverage.
EconomyState control_state(const GrowthProcess& proc);

struct OracleCheck {
  std::string name;
  std::string point;
  double estimate = 0.0;
  double expected = 0.0;
  double std_error = 0.0;
  double z = 0.0;
  bool passed = false;
};

struct OracleSuiteConfig {
  std::int64_t n_paths = 1'000'000;
  std::uint64_t master_seed = 0;
  unsigned workers = 0;
};

/// Runs every Monte Carlo and series oracle over validation_grid(). Output
/// order is fixed and results are independent of the worker count.
std::vector<OracleCheck> run_oracle_suite(const OracleSuiteConfig& cfg);

}  // namespace lucas
