#include "lucas/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include "json.hpp"

namespace lucas {

namespace {

std::ofstream open_output(const std::filesystem::path& dest) {
  std::ofstream out(dest, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + dest.string() + " for writing");
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& dest) {
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + dest.string());
}

std::string optional_number(const std::optional<double>& v) {
  return v ? fmt::format("{:.12g}", *v) : std::string("absent");
}

}  // namespace

std::vector<double> alpha_range(double lo, double hi, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("alpha step must be > 0");
  if (!(lo > 0.0)) throw std::invalid_argument("alpha grid must start above 0");
  if (hi < lo) throw std::invalid_argument("alpha grid upper bound below lower bound");
  const auto count = static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count));
  for (std::int64_t j = 0; j < count; ++j) grid.push_back(lo + static_cast<double>(j) * step);
  return grid;
}

std::vector<FrontierRow> frontier_grid(std::span<const double> alpha_grid,
                                       std::span<const double> rho_list,
                                       const GrowthProcess& base) {
  if (alpha_grid.empty() || rho_list.empty()) {
    throw std::invalid_argument("frontier grid needs at least one alpha and one rho");
  }
  const double s2x = observed_variance(base);
  std::vector<FrontierRow> rows;
  rows.reserve(alpha_grid.size() * rho_list.size());
  for (const double rho : rho_list) {
    const GrowthProcess proc = GrowthProcess::from_observed(base.mu_x(), s2x, rho);
    for (const double alpha : alpha_grid) rows.push_back({alpha, rho, beta_prime(alpha, proc)});
  }
  return rows;
}

std::vector<FrontierRow> default_graph1_grid() {
  const std::vector<double> alphas = alpha_range(1.0, 80.0, 0.5);
  const std::vector<double> rhos = {-0.15, 0.0, 0.5};
  return frontier_grid(alphas, rhos, default_calibration());
}

ScenarioReport scenario_report(const Preferences& prefs, const GrowthProcess& proc) {
  const PremiumDiagnostic diag = misleading_premium_report(prefs, proc);
  const PriceCoefficients co = coefficients(prefs, proc);
  const bool exists = co.a.has_value();
  std::optional<ReturnBlock> returns;
  if (proc.rho() == 0.0 && exists) returns = return_block_iid(prefs, proc);
  return ScenarioReport{prefs, proc, co, diag.beta_prime, exists, diag.premium_log, returns,
                        diag.verdict};
}

std::string render_report_text(const ScenarioReport& r) {
  std::string out;
  auto line = [&out](std::string_view key, const std::string& value) {
    out += fmt::format("{}: {}\n", key, value);
  };
  auto num = [](double v) { return fmt::format("{:.12g}", v); };
  line("alpha", num(r.prefs.alpha()));
  line("beta", num(r.prefs.beta()));
  line("mu_x", num(r.proc.mu_x()));
  line("sigma2_x", num(observed_variance(r.proc)));
  line("sigma2_eps", num(r.proc.sigma2_eps()));
  line("rho", num(r.proc.rho()));
  line("k", num(r.coefficients.k));
  line("e", num(r.coefficients.e));
  line("b", num(r.coefficients.b));
  line("margin", num(r.coefficients.margin));
  line("a", optional_number(r.coefficients.a));
  line("beta_prime", num(r.beta_prime));
  line("equilibrium_exists", r.exists ? "true" : "false");
  line("premium_log", num(r.premium_log));
  line("premium_percent", fmt::format("{:.4g} percent", 100.0 * r.premium_log));
  if (r.returns) {
    line("risk_free_gross", num(r.returns->risk_free_gross));
    line("expected_equity_gross", num(r.returns->expected_equity_gross));
    line("log_premium_from_returns", num(r.returns->log_premium));
  } else {
    line("risk_free_gross", "absent");
    line("expected_equity_gross", "absent");
    line("log_premium_from_returns", "absent");
  }
  line("verdict", std::string(to_string(r.verdict)));
  return out;
}

std::string render_report_json(const ScenarioReport& r) {
  using nlohmann::json;
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json j;
  j["inputs"] = {{"alpha", r.prefs.alpha()},
                 {"beta", r.prefs.beta()},
                 {"mu_x", r.proc.mu_x()},
                 {"sigma2_x", observed_variance(r.proc)},
                 {"sigma2_eps", r.proc.sigma2_eps()},
                 {"rho", r.proc.rho()}};
  j["coefficients"] = {{"k", r.coefficients.k},
                       {"e", r.coefficients.e},
                       {"b", r.coefficients.b},
                       {"a", opt(r.coefficients.a)},
                       {"margin", r.coefficients.margin}};
  j["beta_prime"] = r.beta_prime;
  j["exists"] = r.exists;
  j["premium_log"] = r.premium_log;
  if (r.returns) {
    j["return_block"] = {{"risk_free_gross", r.returns->risk_free_gross},
                         {"expected_equity_gross", r.returns->expected_equity_gross},
                         {"log_premium", r.returns->log_premium}};
  } else {
    j["return_block"] = nullptr;
  }
  j["verdict"] = std::string(to_string(r.verdict));
  return j.dump(2) + "\n";
}

void write_frontier_csv(std::span<const FrontierRow> rows, std::ostream& out) {
  out << "alpha,rho,beta_prime\n";
  for (const auto& row : rows) {
    out << fmt::format("{:.6f},{:.6f},{:.12f}\n", row.alpha, row.rho, row.beta_prime);
  }
}

void emit_frontier_csv(std::span<const FrontierRow> rows, const std::filesystem::path& dest) {
  std::ofstream out = open_output(dest);
  write_frontier_csv(rows, out);
  finish_output(out, dest);
}

std::vector<FrontierRow> read_frontier_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "alpha,rho,beta_prime") {
    throw std::runtime_error("frontier CSV: missing or unexpected header");
  }
  std::vector<FrontierRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    FrontierRow row;
    char c1 = 0;
    char c2 = 0;
    if (!(fields >> row.alpha >> c1 >> row.rho >> c2 >> row.beta_prime) || c1 != ',' ||
        c2 != ',') {
      throw std::runtime_error("frontier CSV: malformed row '" + line + "'");
    }
    rows.push_back(row);
  }
  return rows;
}

std::string render_frontier_svg(std::span<const FrontierRow> rows) {
  // Group by rho, keeping first-appearance order.
  std::vector<double> rhos;
  std::map<double, std::vector<FrontierRow>> curves;
  for (const auto& row : rows) {
    if (!curves.contains(row.rho)) rhos.push_back(row.rho);
    curves[row.rho].push_back(row);
  }
  if (rhos.empty()) throw std::invalid_argument("cannot plot an empty frontier");
  for (auto& [rho, pts] : curves) {
    std::sort(pts.begin(), pts.end(),
              [](const FrontierRow& l, const FrontierRow& r) { return l.alpha < r.alpha; });
    const auto distinct = std::unique(pts.begin(), pts.end(), [](const auto& l, const auto& r) {
      return l.alpha == r.alpha;
    });
    if (distinct - pts.begin() < 2) {
      throw std::invalid_argument(fmt::format("rho = {:g} has fewer than two alphas", rho));
    }
  }

  double x_min = rows.front().alpha, x_max = x_min, y_max = 0.0;
  for (const auto& row : rows) {
    x_min = std::min(x_min, row.alpha);
    x_max = std::max(x_max, row.alpha);
    y_max = std::max(y_max, row.beta_prime);
  }
  const double y_min = 0.0;
  y_max *= 1.05;

  constexpr double width = 720.0, height = 480.0;
  constexpr double left = 70.0, right = 150.0, top = 30.0, bottom = 60.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  auto sx = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
  auto sy = [&](double y) { return top + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h; };

  auto nice_step = [](double span) {
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (const double f : {1.0, 2.0, 5.0}) {
      if (f * mag >= raw) return f * mag;
    }
    return 10.0 * mag;
  };

  std::string svg;
  svg += fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\">\n",
      width, height);
  svg += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n",
                     width, height);
  svg += fmt::format(
      "<g stroke=\"black\" stroke-width=\"1\">\n"
      "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\"/>\n"
      "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{3:.2f}\"/>\n"
      "</g>\n",
      left, top + plot_h, left + plot_w, top);

  svg += "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
  const double x_step = nice_step(x_max - x_min);
  for (double t = std::ceil(x_min / x_step) * x_step; t <= x_max + 1e-9; t += x_step) {
    svg += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>"
        "<text x=\"{0:.2f}\" y=\"{3:.2f}\" text-anchor=\"middle\">{4:g}</text>\n",
        sx(t), top + plot_h, top + plot_h + 5.0, top + plot_h + 20.0, t);
  }
  const double y_step = nice_step(y_max - y_min);
  for (double t = y_min; t <= y_max + 1e-12; t += y_step) {
    svg += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"black\"/>"
        "<text x=\"{3:.2f}\" y=\"{4:.2f}\" text-anchor=\"end\">{5:g}</text>\n",
        left - 5.0, sy(t), left, left - 8.0, sy(t) + 4.0, t);
  }
  svg += fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" font-size=\"14\">α</text>\n",
      left + plot_w / 2.0, height - 15.0);
  svg += fmt::format(
      "<text x=\"20\" y=\"{0:.2f}\" text-anchor=\"middle\" font-size=\"14\" "
      "transform=\"rotate(-90 20 {0:.2f})\">β′</text>\n",
      top + plot_h / 2.0);
  svg += "</g>\n";

  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                            "#ff7f0e", "#9467bd", "#8c564b"};
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    const char* color = kColors[i % std::size(kColors)];
    std::string points;
    for (const auto& row : curves[rhos[i]]) {
      if (!points.empty()) points += ' ';
      points += fmt::format("{:.2f},{:.2f}", sx(row.alpha), sy(row.beta_prime));
    }
    svg += fmt::format(
        "<polyline class=\"frontier\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\" "
        "points=\"{}\"/>\n",
        color, points);
    const double ly = top + 20.0 + 22.0 * static_cast<double>(i);
    const double lx = left + plot_w + 15.0;
    svg += fmt::format(
        "<g class=\"legend\"><line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" "
        "stroke=\"{3}\" stroke-width=\"2\"/><text x=\"{4:.2f}\" y=\"{5:.2f}\" "
        "font-family=\"sans-serif\" font-size=\"12\">ρ = {6:g}</text></g>\n",
        lx, ly, lx + 25.0, color, lx + 32.0, ly + 4.0, rhos[i]);
  }
  svg += "</svg>\n";
  return svg;
}

void emit_frontier_svg(std::span<const FrontierRow> rows, const std::filesystem::path& dest) {
  const std::string svg = render_frontier_svg(rows);
  std::ofstream out = open_output(dest);
  out << svg;
  finish_output(out, dest);
}

}  // namespace lucas
