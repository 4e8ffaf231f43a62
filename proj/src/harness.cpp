#include "bai/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "bai/oracles.hpp"

namespace bai {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Welford {
  std::int64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    n += 1;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double variance() const {
    return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
  }
};

double binomial_log_cdf_term(int n, int k, double p) {
  const double log_choose = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                            std::lgamma(n - k + 1.0);
  return log_choose + k * std::log(p) + (n - k) * std::log1p(-p);
}

double binomial_cdf(int x, int n, double p) {
  if (p <= 0.0) return 1.0;
  if (p >= 1.0) return x >= n ? 1.0 : 0.0;
  double total = 0.0;
  for (int k = 0; k <= x; ++k) {
    total += std::exp(binomial_log_cdf_term(n, k, p));
  }
  return std::min(total, 1.0);
}

void validate(const ExperimentConfig& config) {
  if (config.algorithms.empty()) {
    throw std::invalid_argument("experiment config: no algorithms selected");
  }
  if (config.delta_grid.empty()) {
    throw std::invalid_argument("experiment config: empty delta grid");
  }
  for (std::size_t i = 0; i < config.delta_grid.size(); ++i) {
    const double d = config.delta_grid[i];
    if (!(d > 0.0 && d < 1.0)) {
      throw std::invalid_argument(
          "experiment config: deltas must lie strictly in (0,1)");
    }
    if (i > 0 && !(d < config.delta_grid[i - 1])) {
      throw std::invalid_argument(
          "experiment config: delta grid must be strictly descending");
    }
  }
  if (config.trials_per_cell < 1) {
    throw std::invalid_argument("experiment config: trials_per_cell >= 1");
  }
  if (config.parallelism < 1) {
    throw std::invalid_argument("experiment config: parallelism >= 1");
  }
  if (config.horizon_cap < config.instance.num_arms()) {
    throw std::invalid_argument("experiment config: horizon_cap below K");
  }
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t algorithm_id,
                          std::uint64_t delta_index, std::uint64_t trial) {
  std::uint64_t s = mix64(base_seed);
  s = mix64(s ^ (algorithm_id + 1));
  s = mix64(s ^ (delta_index + 1));
  s = mix64(s ^ (trial + 1));
  return s;
}

double clopper_pearson_upper(int successes, int trials, double level) {
  if (trials < 1) throw std::invalid_argument("clopper_pearson: trials >= 1");
  if (successes < 0 || successes > trials) {
    throw std::invalid_argument("clopper_pearson: successes out of range");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("clopper_pearson: level in (0,1)");
  }
  if (successes >= trials) return 1.0;
  const double alpha = 1.0 - level;
  double lo = static_cast<double>(successes) / trials;
  double hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (binomial_cdf(successes, trials, mid) > alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

AggregateStats run_campaign(const ExperimentConfig& config,
                            const TraceSink& trace_sink) {
  validate(config);

  const std::size_t num_cells =
      config.algorithms.size() * config.delta_grid.size();
  const std::size_t trials = static_cast<std::size_t>(config.trials_per_cell);
  const std::size_t total = num_cells * trials;

  std::vector<TrialResult> results(total);
  std::vector<Trace> traces(trace_sink ? num_cells : 0);

  const auto run_one = [&](std::size_t task) {
    const std::size_t cell = task / trials;
    const std::size_t trial = task % trials;
    const std::size_t alg_pos = cell / config.delta_grid.size();
    const std::size_t delta_idx = cell % config.delta_grid.size();
    const AlgorithmKind alg = config.algorithms[alg_pos];
    const double delta = config.delta_grid[delta_idx];
    const std::uint64_t seed =
        derive_seed(config.base_seed, static_cast<std::uint64_t>(alg),
                    delta_idx, trial);
    Trace* trace =
        (trace_sink && trial == 0) ? &traces[cell] : nullptr;
    results[task] = run_trial(alg, config.instance, delta, RandomSource(seed),
                              config.horizon_cap, trace);
  };

  const int workers =
      static_cast<int>(std::min<std::size_t>(config.parallelism, total));
  if (workers <= 1) {
    for (std::size_t task = 0; task < total; ++task) run_one(task);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t task = next.fetch_add(1);
          if (task >= total) return;
          try {
            run_one(task);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  AggregateStats stats;
  stats.cells.reserve(num_cells);
  for (std::size_t cell = 0; cell < num_cells; ++cell) {
    const std::size_t alg_pos = cell / config.delta_grid.size();
    const std::size_t delta_idx = cell % config.delta_grid.size();
    CellStats cs;
    cs.algorithm = config.algorithms[alg_pos];
    cs.delta = config.delta_grid[delta_idx];
    cs.trials = config.trials_per_cell;

    Welford pseudo, realized, tau;
    for (std::size_t trial = 0; trial < trials; ++trial) {
      const TrialResult& r = results[cell * trials + trial];
      pseudo.add(r.pseudo_regret);
      realized.add(r.realized_regret);
      tau.add(static_cast<double>(r.stopping_time));
      if (!r.correct || r.censored) cs.errors += 1;
      if (r.censored) cs.censored += 1;
    }
    cs.error_rate = static_cast<double>(cs.errors) / cs.trials;
    cs.error_upper99 = clopper_pearson_upper(cs.errors, cs.trials, 0.99);
    cs.mean_pseudo_regret = pseudo.mean;
    cs.var_pseudo_regret = pseudo.variance();
    cs.mean_realized_regret = realized.mean;
    cs.var_realized_regret = realized.variance();
    cs.mean_tau = tau.mean;
    cs.var_tau = tau.variance();

    const double log_inv = std::log(1.0 / cs.delta);
    cs.regret_over_log = cs.mean_pseudo_regret / log_inv;
    cs.tau_over_log = cs.mean_tau / log_inv;
    const double lb = regret_lower_bound(config.instance, cs.delta);
    cs.regret_over_lower_bound =
        lb > 0.0 ? cs.mean_pseudo_regret / lb : kInf;
    if (log_inv > 1.0) {
      const double gamma = std::log(log_inv);
      cs.tau_over_log_loglog_sq = cs.mean_tau / (log_inv * gamma * gamma);
    } else {
      cs.tau_over_log_loglog_sq = kInf;
    }
    stats.cells.push_back(std::move(cs));
  }

  if (trace_sink) {
    for (std::size_t cell = 0; cell < num_cells; ++cell) {
      const std::size_t alg_pos = cell / config.delta_grid.size();
      const std::size_t delta_idx = cell % config.delta_grid.size();
      trace_sink(config.algorithms[alg_pos], config.delta_grid[delta_idx],
                 traces[cell]);
    }
  }
  return stats;
}

}  // namespace bai
