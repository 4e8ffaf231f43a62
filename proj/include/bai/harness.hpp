#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "bai/algorithm.hpp"

namespace bai {

struct ExperimentConfig {
  BanditInstance instance;
  std::vector<AlgorithmKind> algorithms;
  std::vector<double> delta_grid;  // strictly descending, all in (0,1)
  int trials_per_cell = 1;
  std::uint64_t base_seed = 1;
  std::int64_t horizon_cap = 10000000;
  int parallelism = 1;
};

// Aggregates for one (algorithm, delta) cell. Means and variances are
// streaming (Welford) over the trials in seed order, so they are identical
// for every parallelism level. A censored trial counts as an error.
struct CellStats {
  AlgorithmKind algorithm;
  double delta = 0.0;
  int trials = 0;
  int errors = 0;
  int censored = 0;
  double error_rate = 0.0;
  double error_upper99 = 0.0;  // one-sided 99% Clopper-Pearson bound
  double mean_pseudo_regret = 0.0, var_pseudo_regret = 0.0;
  double mean_realized_regret = 0.0, var_realized_regret = 0.0;
  double mean_tau = 0.0, var_tau = 0.0;
  // Derived ratios; +inf marks an undefined denominator.
  double regret_over_log = 0.0;          // mean pseudo-regret / ln(1/delta)
  double regret_over_lower_bound = 0.0;  // vs I* kl_B(delta, 1-delta)
  double tau_over_log = 0.0;             // mean tau / ln(1/delta)
  double tau_over_log_loglog_sq = 0.0;   // mean tau / (ln(1/d) (lnln(1/d))^2)
};

struct AggregateStats {
  std::vector<CellStats> cells;  // algorithms-major, delta-minor order
};

// Splitmix64 finalizer; the per-trial seed chain is
//   mix64(mix64(mix64(mix64(base) ^ (alg_id+1)) ^ (delta_idx+1)) ^ (trial+1)).
std::uint64_t mix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t algorithm_id,
                          std::uint64_t delta_index, std::uint64_t trial);

// One-sided upper confidence bound for a binomial proportion
// (Clopper-Pearson): the largest p with P(Bin(n,p) <= successes) >= 1-level
// ... solved as the p where the left tail equals 1-level.
double clopper_pearson_upper(int successes, int trials, double level);

// Sink for the per-step trace of the first trial of each cell.
using TraceSink =
    std::function<void(AlgorithmKind, double delta, const Trace&)>;

// Runs trials_per_cell seeded trials for every (algorithm, delta) cell over
// a worker pool. Bit-identical output for any parallelism: each trial's
// seed depends only on (base_seed, algorithm id, delta index, trial index)
// and aggregation always walks trials in index order.
AggregateStats run_campaign(const ExperimentConfig& config,
                            const TraceSink& trace_sink = nullptr);

}  // namespace bai
