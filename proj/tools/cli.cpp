#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "lucas/closed_form.hpp"
#include "lucas/risk_premium.hpp"
#include "lucas/simulation.hpp"
#include "lucas/sweep.hpp"
#include "lucas/verification.hpp"

namespace lucas::cli {

namespace {

constexpr std::int64_t kDefaultSimulatePaths = 1000;
constexpr std::int64_t kDefaultVerifyPaths = 1'000'000;

std::string num(double v) { return fmt::format("{:.12g}", v); }

void kv(std::ostream& out, std::string_view key, const std::string& value) {
  out << key << ": " << value << '\n';
}

// Raw option storage; optionals are filled from option counts after parsing.
struct Staging {
  double alpha = 0.0;
  double beta = 0.0;
  double sigma2_eps = 0.0;
  std::string csv, svg, json;
};

void add_calibration(CLI::App* sub, CliInvocation& inv, Staging& st, bool with_rho = true,
                     bool with_eps_variance = true) {
  sub->add_option("--mu-x", inv.mu_x, "Mean log consumption growth")->capture_default_str();
  auto* s2x = sub->add_option("--sigma2-x", inv.sigma2_x, "Variance of log consumption growth")
                  ->check(CLI::NonNegativeNumber)
                  ->capture_default_str();
  if (with_eps_variance) {
    sub->add_option("--sigma2-eps", st.sigma2_eps,
                    "Innovation variance (expert; replaces --sigma2-x)")
        ->check(CLI::NonNegativeNumber)
        ->excludes(s2x);
  }
  if (with_rho) sub->add_option("--rho", inv.rho, "MA(1) coefficient")->capture_default_str();
}

CLI::Option* add_alpha(CLI::App* sub, Staging& st) {
  return sub->add_option("--alpha", st.alpha, "Relative risk aversion")->check(CLI::PositiveNumber);
}

CLI::Option* add_beta(CLI::App* sub, Staging& st) {
  return sub->add_option("--beta", st.beta, "Subjective discount factor")
      ->check(CLI::PositiveNumber);
}

void print_inputs(std::ostream& out, const CliInvocation& inv, const GrowthProcess& proc) {
  if (inv.alpha) kv(out, "alpha", num(*inv.alpha));
  if (inv.beta) kv(out, "beta", num(*inv.beta));
  kv(out, "mu_x", num(proc.mu_x()));
  kv(out, "sigma2_x", num(observed_variance(proc)));
  kv(out, "sigma2_eps", num(proc.sigma2_eps()));
  kv(out, "rho", num(proc.rho()));
}

int run_price(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
  const Preferences prefs(*inv.alpha, *inv.beta);
  const GrowthProcess proc = inv.process();
  const EconomyState state(inv.c, inv.eps);
  const PriceCoefficients co = coefficients(prefs, proc);
  const double bp = beta_prime(prefs.alpha(), proc);

  print_inputs(out, inv, proc);
  kv(out, "eps", num(state.eps()));
  kv(out, "c", num(state.c()));
  kv(out, "k", num(co.k));
  kv(out, "e", num(co.e));
  kv(out, "b", num(co.b));
  kv(out, "margin", num(co.margin));
  kv(out, "beta_prime", num(bp));
  if (!co.a) {
    kv(out, "a", "absent");
    err << fmt::format(
        "error: no equilibrium: existence restriction beta < beta_prime violated "
        "(beta = {}, beta_prime = {:.6f}, k + e = {})\n",
        num(prefs.beta()), bp, num(co.margin));
    return 1;
  }
  kv(out, "a", num(*co.a));
  kv(out, "price_dividend_ratio", num(price_dividend_ratio(co, state.eps())));
  kv(out, "price", num(equilibrium_price(co, state)));
  return 0;
}

int run_frontier(const CliInvocation& inv, std::ostream& out) {
  if (inv.alpha) {
    const GrowthProcess proc = inv.process();
    kv(out, "alpha", num(*inv.alpha));
    kv(out, "rho", num(proc.rho()));
    kv(out, "beta_prime", num(beta_prime(*inv.alpha, proc)));
    return 0;
  }
  if (inv.beta) {
    const GrowthProcess proc = inv.process();
    const std::optional<double> top = max_alpha_given_beta(*inv.beta, proc);
    kv(out, "beta", num(*inv.beta));
    kv(out, "rho", num(proc.rho()));
    kv(out, "frontier_peak_alpha", num(frontier_peak_alpha(proc)));
    kv(out, "max_alpha", top ? num(*top) : std::string("absent"));
    return 0;
  }

  const std::vector<double> alphas = alpha_range(inv.alpha_min, inv.alpha_max, inv.alpha_step);
  const std::vector<double> rhos = inv.rho_given ? std::vector<double>{inv.rho} : inv.rhos;
  const GrowthProcess base = GrowthProcess::from_observed(inv.mu_x, inv.sigma2_x, 0.0);
  const std::vector<FrontierRow> rows = frontier_grid(alphas, rhos, base);

  if (!inv.csv && !inv.svg) {
    write_frontier_csv(rows, out);
    return 0;
  }
  kv(out, "rows", std::to_string(rows.size()));
  if (inv.csv) {
    emit_frontier_csv(rows, *inv.csv);
    kv(out, "csv", inv.csv->string());
  }
  if (inv.svg) {
    emit_frontier_svg(rows, *inv.svg);
    kv(out, "svg", inv.svg->string());
  }
  return 0;
}

int run_premium(const CliInvocation& inv, std::ostream& out) {
  const GrowthProcess proc = inv.process();
  const double premium = equity_premium_log(*inv.alpha, observed_variance(proc));
  print_inputs(out, inv, proc);
  kv(out, "premium_log", num(premium));
  kv(out, "premium_percent", fmt::format("{:.4g} percent", 100.0 * premium));
  if (!inv.beta) return 0;

  const Preferences prefs(*inv.alpha, *inv.beta);
  const PremiumDiagnostic d = misleading_premium_report(prefs, proc);
  kv(out, "equilibrium_exists", d.exists ? "true" : "false");
  kv(out, "margin", num(d.margin));
  kv(out, "beta_prime", num(d.beta_prime));
  kv(out, "a", d.a ? num(*d.a) : std::string("absent"));
  if (proc.rho() == 0.0) {
    kv(out, "risk_free_gross", num(risk_free_rate_iid(prefs, proc)));
    kv(out, "expected_equity_gross",
       d.exists ? num(expected_equity_return_iid(prefs, proc)) : std::string("absent"));
  }
  kv(out, "verdict", std::string(to_string(d.verdict)));
  return 0;
}

int run_report(const CliInvocation& inv, std::ostream& out) {
  const ScenarioReport report = scenario_report(Preferences(*inv.alpha, *inv.beta), inv.process());
  out << render_report_text(report);
  if (inv.json) {
    std::ofstream file(*inv.json, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open " + inv.json->string() + " for writing");
    file << render_report_json(report);
    if (!file) throw std::runtime_error("failed writing " + inv.json->string());
    kv(out, "json", inv.json->string());
  }
  return 0;
}

int run_simulate(const CliInvocation& inv, std::ostream& out) {
  const GrowthProcess proc = inv.process();
  SimConfig cfg;
  cfg.n_paths = inv.paths > 0 ? inv.paths : kDefaultSimulatePaths;
  cfg.horizon = inv.horizon;
  cfg.master_seed = inv.seed;
  cfg.stationary_start = !inv.zero_start;
  cfg.workers = inv.workers;

  std::optional<PriceCoefficients> co;
  if (inv.alpha && inv.beta) co = coefficients(Preferences(*inv.alpha, *inv.beta), proc);

  const std::vector<PathSample> paths = simulate_growth_paths(proc, cfg);
  const PathSummary s = summarize_paths(paths, co ? &*co : nullptr);

  auto opt = [](const std::optional<double>& v) { return v ? num(*v) : std::string("absent"); };
  print_inputs(out, inv, proc);
  kv(out, "seed", std::to_string(cfg.master_seed));
  kv(out, "paths", std::to_string(s.n_paths));
  kv(out, "horizon", std::to_string(s.horizon));
  kv(out, "start", cfg.stationary_start ? "stationary" : "zero");
  kv(out, "mean_growth", num(s.mean_growth));
  kv(out, "growth_variance", num(s.growth_variance));
  kv(out, "lag1_autocorr", opt(s.lag1_autocorr));
  kv(out, "lag1_autocorr_theory", num(ma1_lag1_autocorr(proc.rho())));
  kv(out, "lag2_autocorr", opt(s.lag2_autocorr));
  if (co) {
    kv(out, "equilibrium_exists", co->a ? "true" : "false");
    kv(out, "mean_price_dividend", opt(s.mean_price_dividend));
    kv(out, "mean_gross_return", opt(s.mean_gross_return));
  }

  if (inv.csv) {
    std::ofstream file(*inv.csv, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open " + inv.csv->string() + " for writing");
    file << "path,t,eps,x,c,p\n";
    for (std::size_t i = 0; i < paths.size(); ++i) {
      const PathSample& path = paths[i];
      std::vector<double> prices;
      if (co && co->a) prices = price_path(*co, path);
      for (std::size_t t = 0; t < path.consumptions.size(); ++t) {
        file << fmt::format("{},{},{:.17g},{},{:.17g},{}\n", i, t, path.innovations[t],
                            t == 0 ? std::string() : fmt::format("{:.17g}", path.growths[t - 1]),
                            path.consumptions[t],
                            prices.empty() ? std::string() : fmt::format("{:.17g}", prices[t]));
      }
    }
    if (!file) throw std::runtime_error("failed writing " + inv.csv->string());
    kv(out, "csv", inv.csv->string());
  }
  return 0;
}

int run_verify(const CliInvocation& inv, std::ostream& out) {
  OracleSuiteConfig cfg;
  cfg.n_paths = inv.paths > 0 ? inv.paths : kDefaultVerifyPaths;
  cfg.master_seed = inv.seed;
  cfg.workers = inv.workers;

  kv(out, "seed", std::to_string(cfg.master_seed));
  kv(out, "paths", std::to_string(cfg.n_paths));
  const std::vector<OracleCheck> checks = run_oracle_suite(cfg);
  std::size_t failed = 0;
  for (const auto& c : checks) {
    if (!c.passed) ++failed;
    out << fmt::format("{} [{}] estimate={:.9e} expected={:.9e} se={:.3e} z={:.3f} {}\n",
                       c.name, c.point, c.estimate, c.expected, c.std_error, c.z,
                       c.passed ? "PASS" : "FAIL");
  }
  kv(out, "checks", std::to_string(checks.size()));
  kv(out, "failed", std::to_string(failed));
  kv(out, "result", failed == 0 ? "PASS" : "FAIL");
  return failed == 0 ? 0 : 1;
}

}  // namespace

GrowthProcess CliInvocation::process() const { return process(rho); }

GrowthProcess CliInvocation::process(double rho_override) const {
  if (sigma2_eps) return GrowthProcess(mu_x, *sigma2_eps, rho_override);
  return GrowthProcess::from_observed(mu_x, sigma2_x, rho_override);
}

std::variant<CliInvocation, ParseExit> parse_invocation(const std::vector<std::string>& argv) {
  CliInvocation inv;
  Staging st;

  CLI::App app("Lucas-tree equilibrium pricing under MA(1) lognormal consumption growth",
               argv.empty() ? "lucas_cli" : argv.front());
  app.require_subcommand(1);

  auto* price = app.add_subcommand("price", "Closed-form price coefficients and price");
  add_alpha(price, st)->required();
  add_beta(price, st)->required();
  add_calibration(price, inv, st);
  price->add_option("--eps", inv.eps, "Current innovation")->capture_default_str();
  price->add_option("--c", inv.c, "Current consumption level")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  auto* frontier = app.add_subcommand("frontier", "Existence frontier beta'(alpha, rho)");
  auto* f_alpha = add_alpha(frontier, st);
  add_beta(frontier, st)->excludes(f_alpha);
  add_calibration(frontier, inv, st, false, false);
  auto* f_rho = frontier->add_option("--rho", inv.rho, "Single MA(1) coefficient");
  frontier->add_option("--rhos", inv.rhos, "MA(1) coefficients of the grid")
      ->delimiter(',')
      ->excludes(f_rho)
      ->capture_default_str();
  frontier->add_option("--alpha-min", inv.alpha_min)->check(CLI::PositiveNumber)->capture_default_str();
  frontier->add_option("--alpha-max", inv.alpha_max)->check(CLI::PositiveNumber)->capture_default_str();
  frontier->add_option("--alpha-step", inv.alpha_step)->check(CLI::PositiveNumber)->capture_default_str();
  frontier->add_option("--csv", st.csv, "Write the grid as CSV");
  frontier->add_option("--svg", st.svg, "Write the grid as an SVG chart");

  auto* premium = app.add_subcommand("premium", "Log equity premium and its validity");
  add_alpha(premium, st)->required();
  add_beta(premium, st);
  add_calibration(premium, inv, st);

  auto* report = app.add_subcommand("report", "Full scenario report");
  add_alpha(report, st)->required();
  add_beta(report, st)->required();
  add_calibration(report, inv, st);
  report->add_option("--json", st.json, "Also write the report as JSON");

  auto* simulate = app.add_subcommand("simulate", "Simulate consumption and price paths");
  add_alpha(simulate, st);
  add_beta(simulate, st);
  add_calibration(simulate, inv, st);
  simulate->add_option("--seed", inv.seed)->capture_default_str();
  simulate->add_option("--paths", inv.paths)->check(CLI::PositiveNumber);
  simulate->add_option("--horizon", inv.horizon)->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--workers", inv.workers, "Worker threads (0 = all cores)");
  simulate->add_flag("--zero-start", inv.zero_start, "Start paths from eps_0 = 0");
  simulate->add_option("--csv", st.csv, "Write every path as CSV");

  auto* verify = app.add_subcommand("verify", "Run the Monte Carlo and series oracle suite");
  verify->add_option("--seed", inv.seed)->capture_default_str();
  verify->add_option("--paths", inv.paths, "Draws per oracle")->check(CLI::PositiveNumber);
  verify->add_option("--workers", inv.workers, "Worker threads (0 = all cores)");

  std::vector<std::string> args(argv.size() > 1 ? argv.begin() + 1 : argv.end(), argv.end());
  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp&) {
    return ParseExit{0, app.help()};
  } catch (const CLI::CallForAllHelp&) {
    return ParseExit{0, app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::ParseError& e) {
    return ParseExit{2, fmt::format("error: {} (see --help)", e.what())};
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  if (name == "price") inv.subcommand = Subcommand::Price;
  else if (name == "frontier") inv.subcommand = Subcommand::Frontier;
  else if (name == "premium") inv.subcommand = Subcommand::Premium;
  else if (name == "report") inv.subcommand = Subcommand::Report;
  else if (name == "simulate") inv.subcommand = Subcommand::Simulate;
  else inv.subcommand = Subcommand::Verify;

  auto given = [sub](const char* flag) {
    const auto opts = sub->get_options([flag](const CLI::Option* o) { return o->check_lname(flag); });
    return !opts.empty() && opts.front()->count() > 0;
  };
  if (given("alpha")) inv.alpha = st.alpha;
  if (given("beta")) inv.beta = st.beta;
  if (given("sigma2-eps")) inv.sigma2_eps = st.sigma2_eps;
  if (given("rho")) inv.rho_given = true;
  if (given("csv")) inv.csv = st.csv;
  if (given("svg")) inv.svg = st.svg;
  if (given("json")) inv.json = st.json;
  return inv;
}

int run(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
  try {
    switch (inv.subcommand) {
      case Subcommand::Price: return run_price(inv, out, err);
      case Subcommand::Frontier: return run_frontier(inv, out);
      case Subcommand::Premium: return run_premium(inv, out);
      case Subcommand::Report: return run_report(inv, out);
      case Subcommand::Simulate: return run_simulate(inv, out);
      case Subcommand::Verify: return run_verify(inv, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

int main_entry(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  auto parsed = parse_invocation(argv);
  if (auto* exit = std::get_if<ParseExit>(&parsed)) {
    (exit->code == 0 ? out : err) << exit->text << (exit->text.ends_with('\n') ? "" : "\n");
    return exit->code;
  }
  return run(std::get<CliInvocation>(parsed), out, err);
}

}  // namespace lucas::cli
