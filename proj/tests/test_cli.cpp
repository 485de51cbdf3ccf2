#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace lucas::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "lucas_cli");
  std::ostringstream out, err;
  const int code = main_entry(args, out, err);
  return {code, out.str(), err.str()};
}

bool has_line(const std::string& text, const std::string& line) {
  return ("\n" + text).find("\n" + line + "\n") != std::string::npos;
}

}  // namespace

TEST_CASE("parse_invocation defaults") {
  auto parsed = parse_invocation({"lucas_cli", "frontier"});
  REQUIRE(std::holds_alternative<CliInvocation>(parsed));
  const auto& inv = std::get<CliInvocation>(parsed);
  CHECK(inv.subcommand == Subcommand::Frontier);
  CHECK(inv.mu_x == 0.0172);
  CHECK(inv.sigma2_x == 0.00125);
  CHECK(inv.rho == 0.0);
  CHECK(inv.eps == 0.0);
  CHECK(inv.c == 1.0);
  CHECK(inv.seed == 0);
  CHECK_FALSE(inv.alpha.has_value());
  CHECK_FALSE(inv.sigma2_eps.has_value());

  auto price = parse_invocation({"lucas_cli", "price", "--alpha", "1", "--beta", "0.95"});
  REQUIRE(std::holds_alternative<CliInvocation>(price));
  CHECK(std::get<CliInvocation>(price).subcommand == Subcommand::Price);
  CHECK(*std::get<CliInvocation>(price).alpha == 1.0);
  CHECK(*std::get<CliInvocation>(price).beta == 0.95);
}

TEST_CASE("usage errors exit 2 with one line") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"frontier", "--bogus"},
           {"price", "--beta", "0.9"},
           {},
           {"dance"},
           {"price", "--alpha", "-1", "--beta", "0.9"},
           {"price", "--alpha", "2", "--beta", "0.9", "--sigma2-x", "0.001", "--sigma2-eps",
            "0.001"},
       }) {
    const Result r = invoke(args);
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  }
}

TEST_CASE("help exits 0 and describes the subcommand") {
  const Result r = invoke({"price", "--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("--alpha") != std::string::npos);
  CHECK(r.out.find("--eps") != std::string::npos);
  const Result top = invoke({"--help"});
  CHECK(top.code == 0);
  CHECK(top.out.find("verify") != std::string::npos);
}

TEST_CASE("price") {
  const Result ok = invoke({"price", "--alpha", "1", "--beta", "0.95", "--c", "2"});
  CHECK(ok.code == 0);
  CHECK(has_line(ok.out, "a: 19"));
  CHECK(has_line(ok.out, "price: 38"));
  CHECK(has_line(ok.out, "b: 0"));

  const Result none = invoke({"price", "--alpha", "55", "--beta", "0.9"});
  CHECK(none.code == 1);
  CHECK(none.err.find("beta < beta_prime") != std::string::npos);
  CHECK(none.err.find("beta_prime = 0.409139") != std::string::npos);
  CHECK(has_line(none.out, "a: absent"));

  const Result expert =
      invoke({"price", "--alpha", "5", "--beta", "0.9", "--rho", "0.5", "--sigma2-eps", "0.001"});
  CHECK(expert.code == 0);
  CHECK(has_line(expert.out, "sigma2_x: 0.00125"));
}

TEST_CASE("frontier") {
  const Result grid = invoke({"frontier"});
  CHECK(grid.code == 0);
  CHECK(std::count(grid.out.begin(), grid.out.end(), '\n') == 478);
  CHECK(grid.out.rfind("alpha,rho,beta_prime\n", 0) == 0);

  const Result point = invoke({"frontier", "--alpha", "55", "--rho", "0.5"});
  CHECK(point.code == 0);
  CHECK(has_line(point.out, "beta_prime: 0.0952071723702"));

  const Result inverse = invoke({"frontier", "--beta", "2"});
  CHECK(has_line(inverse.out, "max_alpha: absent"));

  const auto dir = std::filesystem::temp_directory_path();
  const auto csv = dir / "lucas_cli_frontier.csv";
  const auto svg = dir / "lucas_cli_frontier.svg";
  const Result files = invoke({"frontier", "--rho", "0", "--alpha-max", "20", "--csv",
                               csv.string(), "--svg", svg.string()});
  CHECK(files.code == 0);
  CHECK(has_line(files.out, "rows: 39"));
  CHECK(std::filesystem::exists(csv));
  CHECK(std::filesystem::exists(svg));
  std::filesystem::remove(csv);
  std::filesystem::remove(svg);
}

TEST_CASE("premium and report") {
  const Result premium = invoke({"premium", "--alpha", "30"});
  CHECK(premium.code == 0);
  CHECK(has_line(premium.out, "premium_log: 0.0375"));
  CHECK(has_line(premium.out, "premium_percent: 3.75 percent"));

  const Result misleading = invoke({"premium", "--alpha", "55", "--beta", "0.9"});
  CHECK(has_line(misleading.out, "verdict: MISLEADING"));
  CHECK(has_line(misleading.out, "expected_equity_gross: absent"));

  const Result thirty = invoke({"report", "--alpha", "30", "--beta", "0.9"});
  CHECK(thirty.code == 0);
  CHECK(has_line(thirty.out, "premium_log: 0.0375"));
  CHECK(has_line(thirty.out, "equilibrium_exists: true"));

  const auto json = std::filesystem::temp_directory_path() / "lucas_cli_report.json";
  const Result high = invoke({"report", "--alpha", "55", "--beta", "0.9", "--json", json.string()});
  CHECK(high.code == 0);
  CHECK(has_line(high.out, "verdict: MISLEADING"));
  std::ifstream in(json);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["verdict"] == "MISLEADING");
  CHECK(j["premium_log"].get<double>() == doctest::Approx(0.06875));
  std::filesystem::remove(json);
}

TEST_CASE("simulate and verify are deterministic across worker counts") {
  const std::vector<std::string> sim = {"simulate", "--alpha", "2", "--beta", "0.95",
                                        "--paths", "200", "--horizon", "20", "--seed", "4"};
  auto with_workers = [](std::vector<std::string> args, const char* w) {
    args.push_back("--workers");
    args.push_back(w);
    return args;
  };
  const Result s1 = invoke(with_workers(sim, "1"));
  const Result s3 = invoke(with_workers(sim, "3"));
  CHECK(s1.code == 0);
  CHECK(s1.out == s3.out);
  CHECK(has_line(s1.out, "equilibrium_exists: true"));
  CHECK(s1.out.find("lag1_autocorr: ") != std::string::npos);

  const std::vector<std::string> verify = {"verify", "--seed", "7", "--paths", "20000"};
  const Result v1 = invoke(with_workers(verify, "1"));
  const Result v4 = invoke(with_workers(verify, "4"));
  const Result again = invoke(with_workers(verify, "4"));
  CHECK(v1.out == v4.out);
  CHECK(v4.out == again.out);
  CHECK(v1.code == v4.code);
  CHECK(v1.out.find("euler_residual [beta=0.95 alpha=2 rho=0]") != std::string::npos);
}
