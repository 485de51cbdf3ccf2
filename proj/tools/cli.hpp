#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lucas/model.hpp"

namespace lucas::cli {

enum class Subcommand { Price, Frontier, Premium, Report, Simulate, Verify };

struct CliInvocation {
  Subcommand subcommand = Subcommand::Frontier;

  std::optional<double> alpha;
  std::optional<double> beta;
  double mu_x = kDefaultMeanGrowth;
  double sigma2_x = kDefaultObservedVariance;
  std::optional<double> sigma2_eps;  // expert override of sigma2_x
  double rho = 0.0;
  double eps = 0.0;
  double c = 1.0;

  std::uint64_t seed = 0;
  std::int64_t paths = 0;  // 0: subcommand default
  std::int64_t horizon = 100;
  unsigned workers = 0;
  bool zero_start = false;

  double alpha_min = 1.0;
  double alpha_max = 80.0;
  double alpha_step = 0.5;
  std::vector<double> rhos = {-0.15, 0.0, 0.5};
  bool rho_given = false;

  std::optional<std::filesystem::path> csv;
  std::optional<std::filesystem::path> svg;
  std::optional<std::filesystem::path> json;

  GrowthProcess process() const;
  GrowthProcess process(double rho_override) const;
};

/// Parsing ended without an invocation to run (help or a usage error).
struct ParseExit {
  int code = 0;
  std::string text;  // help text (code 0) or one-line diagnostic (code 2)
};

std::variant<CliInvocation, ParseExit> parse_invocation(const std::vector<std::string>& argv);

/// Exit status: 0 success, 1 computation error or failed verification.
int run(const CliInvocation& inv, std::ostream& out, std::ostream& err);

/// parse_invocation + run, for main().
int main_entry(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace lucas::cli
