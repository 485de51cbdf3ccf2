#include "lucas/simulation.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include "lucas/rng.hpp"

namespace lucas {

namespace {

// Streaming means and co-moments (Welford), merged with Chan's update.
template <std::size_t K>
struct Moments {
  std::int64_t n = 0;
  std::array<double, K> mean{};
  std::array<std::array<double, K>, K> comoment{};

  void push(const std::array<double, K>& x) {
    ++n;
    std::array<double, K> before{};
    for (std::size_t i = 0; i < K; ++i) {
      before[i] = x[i] - mean[i];
      mean[i] += before[i] / static_cast<double>(n);
    }
    for (std::size_t i = 0; i < K; ++i) {
      for (std::size_t j = 0; j < K; ++j) comoment[i][j] += before[i] * (x[j] - mean[j]);
    }
  }

  void merge(const Moments& other) {
    if (other.n == 0) return;
    if (n == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(other.n);
    const double total = na + nb;
    std::array<double, K> delta{};
    for (std::size_t i = 0; i < K; ++i) delta[i] = other.mean[i] - mean[i];
    for (std::size_t i = 0; i < K; ++i) {
      for (std::size_t j = 0; j < K; ++j) {
        comoment[i][j] += other.comoment[i][j] + delta[i] * delta[j] * na * nb / total;
      }
    }
    for (std::size_t i = 0; i < K; ++i) mean[i] += delta[i] * nb / total;
    n += other.n;
  }
};

constexpr std::int64_t kChunkSize = 4096;

unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs sample(index, acc) for index in [0, count). Work is split into fixed
// chunks whose partial moments are merged in chunk order, so the result is
// bit-identical for any worker count.
template <std::size_t K, class Sampler>
Moments<K> reduce_paths(std::int64_t count, unsigned workers, const Sampler& sample) {
  const std::int64_t chunks = (count + kChunkSize - 1) / kChunkSize;
  std::vector<Moments<K>> parts(static_cast<std::size_t>(chunks));
  std::atomic<std::int64_t> next{0};

  auto work = [&] {
    for (;;) {
      const std::int64_t c = next.fetch_add(1);
      if (c >= chunks) return;
      const std::int64_t lo = c * kChunkSize;
      const std::int64_t hi = std::min(count, lo + kChunkSize);
      Moments<K> acc;
      for (std::int64_t idx = lo; idx < hi; ++idx) sample(idx, acc);
      parts[static_cast<std::size_t>(c)] = acc;
    }
  };

  const auto threads = static_cast<std::int64_t>(resolve_workers(workers));
  const std::int64_t spawn = std::min(threads, chunks) - 1;
  {
    std::vector<std::jthread> pool;
    for (std::int64_t t = 0; t < spawn; ++t) pool.emplace_back(work);
    work();
  }

  Moments<K> total;
  for (const auto& part : parts) total.merge(part);
  return total;
}

McEstimate to_estimate(const Moments<1>& m) {
  McEstimate est;
  est.mean = m.mean[0];
  est.n = m.n;
  if (m.n < 2) {
    est.std_error = std::numeric_limits<double>::infinity();
  } else {
    const double var = m.comoment[0][0] / static_cast<double>(m.n - 1);
    est.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(m.n));
  }
  return est;
}

}  // namespace

void SimConfig::validate() const {
  if (n_paths < 1) throw std::invalid_argument("n_paths must be >= 1");
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
}

double McEstimate::z_score(double target) const noexcept {
  const double gap = mean - target;
  if (gap == 0.0) return 0.0;
  return gap / std_error;
}

PathSample simulate_path(const GrowthProcess& proc, const SimConfig& cfg, std::int64_t index) {
  cfg.validate();
  const double sigma = std::sqrt(proc.sigma2_eps());
  const double mu = proc.mu_x();
  const double rho = proc.rho();
  const auto horizon = static_cast<std::size_t>(cfg.horizon);

  PathRng rng(cfg.master_seed, static_cast<std::uint64_t>(index));
  std::normal_distribution<double> normal(0.0, 1.0);

  PathSample path;
  path.innovations.reserve(horizon + 1);
  path.growths.reserve(horizon);
  path.consumptions.reserve(horizon + 1);

  const double eps0 = sigma * normal(rng);
  path.innovations.push_back(cfg.stationary_start ? eps0 : 0.0);
  path.consumptions.push_back(1.0);
  for (std::size_t t = 1; t <= horizon; ++t) {
    const double eps = sigma * normal(rng);
    const double x = mu + eps + rho * path.innovations.back();
    path.innovations.push_back(eps);
    path.growths.push_back(x);
    path.consumptions.push_back(path.consumptions.back() * std::exp(x));
  }
  return path;
}

std::vector<PathSample> simulate_growth_paths(const GrowthProcess& proc, const SimConfig& cfg) {
  cfg.validate();
  std::vector<PathSample> paths(static_cast<std::size_t>(cfg.n_paths));
  std::atomic<std::int64_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= cfg.n_paths) return;
      paths[static_cast<std::size_t>(i)] = simulate_path(proc, cfg, i);
    }
  };
  const auto threads = static_cast<std::int64_t>(resolve_workers(cfg.workers));
  {
    std::vector<std::jthread> pool;
    for (std::int64_t t = 1; t < std::min(threads, cfg.n_paths); ++t) pool.emplace_back(work);
    work();
  }
  return paths;
}

std::vector<double> price_path(const PriceCoefficients& co, const PathSample& path) {
  if (path.innovations.size() != path.consumptions.size()) {
    throw std::invalid_argument("path innovations and consumptions are misaligned");
  }
  std::vector<double> prices(path.consumptions.size());
  for (std::size_t t = 0; t < prices.size(); ++t) {
    prices[t] = price_dividend_ratio(co, path.innovations[t]) * path.consumptions[t];
  }
  return prices;
}

std::vector<double> realized_returns(std::span<const double> prices,
                                     std::span<const double> consumptions) {
  if (prices.size() != consumptions.size()) {
    throw std::invalid_argument("prices and consumptions differ in length");
  }
  if (prices.size() < 2) throw std::invalid_argument("need at least two periods for a return");
  std::vector<double> returns(prices.size() - 1);
  for (std::size_t t = 0; t + 1 < prices.size(); ++t) {
    returns[t] = (prices[t + 1] + consumptions[t + 1]) / prices[t];
  }
  return returns;
}

McEstimate euler_residual_mc(const Preferences& prefs, const GrowthProcess& proc,
                             const PriceCoefficients& co, const EconomyState& state,
                             const SimConfig& cfg) {
  cfg.validate();
  if (!co.a) throw NoEquilibriumError(co.margin);
  const double a = *co.a;
  const double b = co.b;
  const double sigma = std::sqrt(proc.sigma2_eps());
  const double mu = proc.mu_x();
  const double rho = proc.rho();
  const double alpha = prefs.alpha();
  const double beta = prefs.beta();
  const double c = state.c();
  const double eps_now = state.eps();
  const double price_now = a * std::exp(b * eps_now) * c;

  auto sample = [&](std::int64_t idx, Moments<1>& acc) {
    PathRng rng(cfg.master_seed, static_cast<std::uint64_t>(idx));
    std::normal_distribution<double> normal(0.0, 1.0);
    const double eps_next = sigma * normal(rng);
    const double x = mu + eps_next + rho * eps_now;
    const double c_next = c * std::exp(x);
    const double price_next = a * std::exp(b * eps_next) * c_next;
    const double kernel = beta * std::exp(-alpha * x);
    acc.push({kernel * (price_next + c_next) / price_now - 1.0});
  };
  return to_estimate(reduce_paths<1>(cfg.n_paths, cfg.workers, sample));
}

McEstimate euler_residual_mc(const Preferences& prefs, const GrowthProcess& proc,
                             const EconomyState& state, const SimConfig& cfg) {
  return euler_residual_mc(prefs, proc, coefficients(prefs, proc), state, cfg);
}

McEstimate series_term_mc(std::int64_t i, const Preferences& prefs, const GrowthProcess& proc,
                          const EconomyState& state, const SimConfig& cfg) {
  cfg.validate();
  if (i < 1) throw std::invalid_argument("series index must be >= 1");
  const double sigma = std::sqrt(proc.sigma2_eps());
  const double mu = proc.mu_x();
  const double rho = proc.rho();
  const double one_minus_alpha = 1.0 - prefs.alpha();
  const double log_discount = static_cast<double>(i) * std::log(prefs.beta());

  auto sample = [&](std::int64_t idx, Moments<1>& acc) {
    PathRng rng(cfg.master_seed, static_cast<std::uint64_t>(idx));
    std::normal_distribution<double> normal(0.0, 1.0);
    double prev = state.eps();
    double log_growth = 0.0;
    for (std::int64_t j = 0; j < i; ++j) {
      const double eps = sigma * normal(rng);
      log_growth += mu + eps + rho * prev;
      prev = eps;
    }
    acc.push({std::exp(log_discount + one_minus_alpha * log_growth)});
  };
  return to_estimate(reduce_paths<1>(cfg.n_paths, cfg.workers, sample));
}

McEstimate empirical_premium_mc(const Preferences& prefs, const GrowthProcess& proc,
                                const SimConfig& cfg) {
  cfg.validate();
  if (proc.rho() != 0.0) {
    throw std::invalid_argument("empirical premium oracle requires rho = 0");
  }
  const PriceCoefficients co = coefficients(prefs, proc);
  if (!co.a) throw NoEquilibriumError(co.margin);
  const double alpha = prefs.alpha();
  const double beta = prefs.beta();

  auto sample = [&](std::int64_t idx, Moments<2>& acc) {
    const PathSample path = simulate_path(proc, cfg, idx);
    const std::vector<double> prices = price_path(co, path);
    const std::vector<double> returns = realized_returns(prices, path.consumptions);
    for (std::size_t t = 0; t < returns.size(); ++t) {
      acc.push({returns[t], beta * std::exp(-alpha * path.growths[t])});
    }
  };
  const Moments<2> m = reduce_paths<2>(cfg.n_paths, cfg.workers, sample);

  McEstimate est;
  est.n = m.n;
  const double mean_return = m.mean[0];
  const double mean_kernel = m.mean[1];
  est.mean = std::log(mean_return) + std::log(mean_kernel);
  if (m.n < 2) {
    est.std_error = std::numeric_limits<double>::infinity();
  } else {
    const double denom = static_cast<double>(m.n - 1);
    const double var = m.comoment[0][0] / denom / (mean_return * mean_return) +
                       m.comoment[1][1] / denom / (mean_kernel * mean_kernel) +
                       2.0 * m.comoment[0][1] / denom / (mean_return * mean_kernel);
    est.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(m.n));
  }
  return est;
}

PathSummary summarize_paths(std::span<const PathSample> paths, const PriceCoefficients* co) {
  if (paths.empty()) throw std::invalid_argument("no paths to summarize");
  PathSummary s;
  s.n_paths = static_cast<std::int64_t>(paths.size());
  s.horizon = static_cast<std::int64_t>(paths.front().growths.size());

  double sum = 0.0;
  std::int64_t count = 0;
  for (const auto& path : paths) {
    for (const double x : path.growths) sum += x;
    count += static_cast<std::int64_t>(path.growths.size());
  }
  s.mean_growth = sum / static_cast<double>(count);

  // Each lag is averaged over its own number of products.
  double sq = 0.0, lag1 = 0.0, lag2 = 0.0;
  std::int64_t n_lag1 = 0, n_lag2 = 0;
  for (const auto& path : paths) {
    const auto& g = path.growths;
    for (std::size_t t = 0; t < g.size(); ++t) {
      const double d = g[t] - s.mean_growth;
      sq += d * d;
      if (t >= 1) {
        lag1 += d * (g[t - 1] - s.mean_growth);
        ++n_lag1;
      }
      if (t >= 2) {
        lag2 += d * (g[t - 2] - s.mean_growth);
        ++n_lag2;
      }
    }
  }
  s.growth_variance = count > 1 ? sq / static_cast<double>(count - 1) : 0.0;
  if (sq > 0.0) {
    const double gamma0 = sq / static_cast<double>(count);
    if (n_lag1 > 0) s.lag1_autocorr = lag1 / static_cast<double>(n_lag1) / gamma0;
    if (n_lag2 > 0) s.lag2_autocorr = lag2 / static_cast<double>(n_lag2) / gamma0;
  }

  if (co != nullptr && co->a) {
    double pd = 0.0, ret = 0.0;
    std::int64_t n_pd = 0, n_ret = 0;
    for (const auto& path : paths) {
      const std::vector<double> prices = price_path(*co, path);
      for (std::size_t t = 0; t < prices.size(); ++t) pd += prices[t] / path.consumptions[t];
      n_pd += static_cast<std::int64_t>(prices.size());
      for (const double r : realized_returns(prices, path.consumptions)) ret += r;
      n_ret += static_cast<std::int64_t>(prices.size()) - 1;
    }
    s.mean_price_dividend = pd / static_cast<double>(n_pd);
    s.mean_gross_return = ret / static_cast<double>(n_ret);
  }
  return s;
}

}  // namespace lucas
