#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lucas/closed_form.hpp"
#include "lucas/model.hpp"
#include "lucas/risk_premium.hpp"

namespace lucas {

struct FrontierRow {
  double alpha = 0.0;
  double rho = 0.0;
  double beta_prime = 0.0;

  bool operator==(const FrontierRow&) const = default;
};

/// lo, lo + step, ... up to hi (inclusive, with a small slack for rounding).
std::vector<double> alpha_range(double lo, double hi, double step);

/// One row per (rho, alpha), rho outer. The observable variance and mean of
/// `base` are held fixed; the innovation variance is recomputed for each rho.
std::vector<FrontierRow> frontier_grid(std::span<const double> alpha_grid,
                                       std::span<const double> rho_list,
                                       const GrowthProcess& base);

/// alpha in [1, 80] step 0.5, rho in {-0.15, 0, 0.5}, default calibration.
std::vector<FrontierRow> default_graph1_grid();

struct ScenarioReport {
  Preferences prefs;
  GrowthProcess proc;
  PriceCoefficients coefficients;
  double beta_prime = 0.0;
  bool exists = false;
  double premium_log = 0.0;
  std::optional<ReturnBlock> returns;  // rho = 0 and equilibrium only
  Verdict verdict = Verdict::Misleading;
};

ScenarioReport scenario_report(const Preferences& prefs, const GrowthProcess& proc);

/// Flat "key: value" lines in a fixed order.
std::string render_report_text(const ScenarioReport& report);
std::string render_report_json(const ScenarioReport& report);

void write_frontier_csv(std::span<const FrontierRow> rows, std::ostream& out);
void emit_frontier_csv(std::span<const FrontierRow> rows, const std::filesystem::path& dest);
std::vector<FrontierRow> read_frontier_csv(std::istream& in);

/// Standalone SVG line chart, one polyline per rho in order of first appearance.
/// Throws std::invalid_argument if some rho has fewer than two distinct alphas.
std::string render_frontier_svg(std::span<const FrontierRow> rows);
void emit_frontier_svg(std::span<const FrontierRow> rows, const std::filesystem::path& dest);

}  // namespace lucas
