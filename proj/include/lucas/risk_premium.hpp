#pragma once

#include <optional>
#include <string_view>

#include "lucas/model.hpp"

namespace lucas {

/// One-period returns of the iid (rho = 0) economy.
struct ReturnBlock {
  double risk_free_gross = 0.0;
  double expected_equity_gross = 0.0;
  /// ln(expected_equity_gross) - ln(risk_free_gross)
  double log_premium = 0.0;
};

enum class Verdict { Valid, Misleading };

std::string_view to_string(Verdict v) noexcept;

/// Outcome of computing the textbook premium and then checking whether an
/// equilibrium price actually exists at the same parameters.
struct PremiumDiagnostic {
  double premium_log = 0.0;
  bool exists = false;
  double margin = 0.0;
  double beta_prime = 0.0;
  std::optional<double> a;
  Verdict verdict = Verdict::Misleading;
};

/// alpha * sigma2_x, in natural-log units.
double equity_premium_log(double alpha, double sigma2_x);

/// exp(-ln beta + alpha mu_x - alpha^2 sigma2_x / 2). Requires rho = 0;
/// defined whether or not the equity price exists.
double risk_free_rate_iid(const Preferences& prefs, const GrowthProcess& proc);

/// exp(-k + mu_x + sigma2_x / 2). Requires rho = 0 and an existing
/// equilibrium (throws NoEquilibriumError otherwise).
double expected_equity_return_iid(const Preferences& prefs, const GrowthProcess& proc);

ReturnBlock return_block_iid(const Preferences& prefs, const GrowthProcess& proc);

/// Premium is always reported; the verdict is Misleading iff no equilibrium exists.
PremiumDiagnostic misleading_premium_report(const Preferences& prefs, const GrowthProcess& proc);

}  // namespace lucas
