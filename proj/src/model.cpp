#include "lucas/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lucas {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be finite");
  }
}

}  // namespace

Preferences::Preferences(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  require_finite(alpha, "alpha");
  require_finite(beta, "beta");
  if (alpha <= 0.0) throw std::invalid_argument("alpha must be > 0");
  if (beta <= 0.0) throw std::invalid_argument("beta must be > 0");
}

GrowthProcess::GrowthProcess(double mu_x, double sigma2_eps, double rho)
    : mu_x_(mu_x), sigma2_eps_(sigma2_eps), rho_(rho) {
  require_finite(mu_x, "mu_x");
  require_finite(sigma2_eps, "sigma2_eps");
  require_finite(rho, "rho");
  if (sigma2_eps < 0.0) throw std::invalid_argument("sigma2_eps must be >= 0");
}

GrowthProcess GrowthProcess::from_observed(double mu_x, double sigma2_x, double rho) {
  return GrowthProcess(mu_x, innovation_variance_from_observed(sigma2_x, rho), rho);
}

GrowthProcess default_calibration(double rho) {
  return GrowthProcess::from_observed(kDefaultMeanGrowth, kDefaultObservedVariance, rho);
}

EconomyState::EconomyState(double c, double eps) : c_(c), eps_(eps) {
  require_finite(c, "c");
  require_finite(eps, "eps");
  if (c <= 0.0) throw std::invalid_argument("consumption level must be > 0");
}

double lognormal_mean(const GaussianSpec& g) {
  require_finite(g.mu, "mu");
  require_finite(g.sigma2, "sigma2");
  if (g.sigma2 < 0.0) throw std::invalid_argument("sigma2 must be >= 0");
  return std::exp(g.mu + 0.5 * g.sigma2);
}

double isoelastic_utility(double c, double alpha) {
  require_finite(c, "c");
  require_finite(alpha, "alpha");
  if (c <= 0.0) throw std::invalid_argument("consumption must be > 0");
  if (alpha <= 0.0) throw std::invalid_argument("alpha must be > 0");
  if (alpha == 1.0) {
    throw std::domain_error("isoelastic utility is undefined at alpha = 1");
  }
  return std::pow(c, 1.0 - alpha) / (1.0 - alpha);
}

double marginal_utility(double c, double alpha) {
  require_finite(c, "c");
  require_finite(alpha, "alpha");
  if (c <= 0.0) throw std::invalid_argument("consumption must be > 0");
  if (alpha <= 0.0) throw std::invalid_argument("alpha must be > 0");
  return std::pow(c, -alpha);
}

double ma1_lag1_autocorr(double rho) noexcept { return rho / (1.0 + rho * rho); }

double observed_variance(const GrowthProcess& p) noexcept {
  return (1.0 + p.rho() * p.rho()) * p.sigma2_eps();
}

double innovation_variance_from_observed(double sigma2_x, double rho) {
  require_finite(sigma2_x, "sigma2_x");
  require_finite(rho, "rho");
  if (sigma2_x < 0.0) throw std::invalid_argument("sigma2_x must be >= 0");
  return sigma2_x / (1.0 + rho * rho);
}

}  // namespace lucas
