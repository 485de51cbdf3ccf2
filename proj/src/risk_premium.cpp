#include "lucas/risk_premium.hpp"

#include <cmath>
#include <stdexcept>

#include "lucas/closed_form.hpp"

namespace lucas {

namespace {

void require_iid(const GrowthProcess& proc) {
  if (proc.rho() != 0.0) {
    throw std::invalid_argument("closed-form returns are only available for rho = 0");
  }
}

}  // namespace

std::string_view to_string(Verdict v) noexcept {
  return v == Verdict::Valid ? "VALID" : "MISLEADING";
}

double equity_premium_log(double alpha, double sigma2_x) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("alpha must be finite and > 0");
  }
  if (!(sigma2_x >= 0.0) || !std::isfinite(sigma2_x)) {
    throw std::invalid_argument("sigma2_x must be finite and >= 0");
  }
  return alpha * sigma2_x;
}

double risk_free_rate_iid(const Preferences& prefs, const GrowthProcess& proc) {
  require_iid(proc);
  const double alpha = prefs.alpha();
  const double s2x = observed_variance(proc);
  return std::exp(-std::log(prefs.beta()) + alpha * proc.mu_x() - 0.5 * alpha * alpha * s2x);
}

double expected_equity_return_iid(const Preferences& prefs, const GrowthProcess& proc) {
  require_iid(proc);
  const PriceCoefficients co = coefficients(prefs, proc);
  if (!co.a) throw NoEquilibriumError(co.margin);
  return std::exp(-co.k + proc.mu_x() + 0.5 * observed_variance(proc));
}

ReturnBlock return_block_iid(const Preferences& prefs, const GrowthProcess& proc) {
  ReturnBlock block;
  block.risk_free_gross = risk_free_rate_iid(prefs, proc);
  block.expected_equity_gross = expected_equity_return_iid(prefs, proc);
  block.log_premium = std::log(block.expected_equity_gross) - std::log(block.risk_free_gross);
  return block;
}

PremiumDiagnostic misleading_premium_report(const Preferences& prefs, const GrowthProcess& proc) {
  const PriceCoefficients co = coefficients(prefs, proc);
  PremiumDiagnostic d;
  d.premium_log = equity_premium_log(prefs.alpha(), observed_variance(proc));
  d.exists = co.a.has_value();
  d.margin = co.margin;
  d.beta_prime = beta_prime(prefs.alpha(), proc);
  d.a = co.a;
  d.verdict = d.exists ? Verdict::Valid : Verdict::Misleading;
  return d;
}

}  // namespace lucas
