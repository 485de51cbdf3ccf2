#pragma once

// Preferences, the MA(1) consumption-growth law and the small set of
// lognormal / MA(1) identities shared by the pricing and simulation code.

namespace lucas {

/// Mean of log consumption growth used as the default calibration.
inline constexpr double kDefaultMeanGrowth = 0.0172;
/// Variance of log consumption growth (observable, not the innovation variance).
inline constexpr double kDefaultObservedVariance = 0.00125;

/// CRRA preferences: relative risk aversion alpha > 0, discount factor beta > 0.
/// beta is allowed to exceed one.
class Preferences {
public:
  Preferences(double alpha, double beta);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

private:
  double alpha_;
  double beta_;
};

/// x_{t+1} = mu_x + eps_{t+1} + rho * eps_t with eps ~ iid N(0, sigma2_eps).
class GrowthProcess {
public:
  GrowthProcess(double mu_x, double sigma2_eps, double rho);

  /// Builds the process from the observable variance V(x) = (1 + rho^2) sigma2_eps.
  static GrowthProcess from_observed(double mu_x, double sigma2_x, double rho);

  double mu_x() const noexcept { return mu_x_; }
  double sigma2_eps() const noexcept { return sigma2_eps_; }
  double rho() const noexcept { return rho_; }

private:
  double mu_x_;
  double sigma2_eps_;
  double rho_;
};

/// Default calibration (mu_x = 0.0172, V(x) = 0.00125) at the given MA coefficient.
GrowthProcess default_calibration(double rho = 0.0);

/// Current dividend level and the innovation realized this period.
class EconomyState {
public:
  EconomyState(double c, double eps);

  double c() const noexcept { return c_; }
  double eps() const noexcept { return eps_; }

private:
  double c_;
  double eps_;
};

struct GaussianSpec {
  double mu = 0.0;
  double sigma2 = 0.0;
};

/// E[exp(z)] for z ~ N(mu, sigma2).
double lognormal_mean(const GaussianSpec& g);

/// c^(1-alpha) / (1-alpha). Throws std::domain_error at alpha == 1.
double isoelastic_utility(double c, double alpha);

/// c^(-alpha).
double marginal_utility(double c, double alpha);

/// Lag-1 autocorrelation of an MA(1) with coefficient rho: rho / (1 + rho^2).
double ma1_lag1_autocorr(double rho) noexcept;

/// (1 + rho^2) * sigma2_eps.
double observed_variance(const GrowthProcess& p) noexcept;

double innovation_variance_from_observed(double sigma2_x, double rho);

}  // namespace lucas
