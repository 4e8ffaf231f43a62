#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bai/instance.hpp"

namespace bai {

enum class AlgorithmKind {
  kDklUcb = 0,       // double-UCB sampling with a biased coin
  kKlUcbStop = 1,    // always pull the f-UCB leader, same stopping rule
  kUniformStop = 2,  // round-robin sampling, same stopping rule
};

const char* algorithm_name(AlgorithmKind kind);

// Full sufficient statistics of a running identification algorithm.
// t counts pulls made so far; counts/sums are per original arm label.
struct AlgState {
  RewardFamily family;
  double delta;
  int num_arms;
  std::int64_t t = 0;
  std::vector<std::int64_t> counts;
  std::vector<double> sums;
  RandomSource rng;

  AlgState(RewardFamily family_in, double delta_in, int num_arms_in,
           RandomSource rng_in)
      : family(family_in),
        delta(delta_in),
        num_arms(num_arms_in),
        counts(num_arms_in, 0),
        sums(num_arms_in, 0.0),
        rng(rng_in) {}

  double empirical_mean(int arm) const {
    return sums[arm] / static_cast<double>(counts[arm]);
  }
};

// Exploration schedules and the coin bias.
double f_exploration(std::int64_t t);                             // 3 ln t
double g_exploration(double delta, std::int64_t t, int num_arms); // ln(2Kt^2/d)
double coin_bias(double delta);  // 1 - min{1/lnln(1/delta), 1/2}, >= 1/2

// Confidence indices for the step about to be decided (t = state.t + 1),
// computed from the statistics gathered so far.
double index_f(const AlgState& state, int arm);
double index_g_upper(const AlgState& state, int arm);
double index_g_lower(const AlgState& state, int arm);

struct Candidates {
  int arm_f;  // argmax of the f-UCB, lowest index on ties
  int arm_g;  // argmax of the g-UCB excluding arm_f
};
Candidates select_candidates(const AlgState& state);

// Stopping predicate: the g-LCB of the leader strictly exceeds the g-UCB of
// the challenger.
bool should_stop(const AlgState& state, const Candidates& candidates);

struct StepOutcome {
  int pulled_arm = -1;  // -1 when the step stopped instead of pulling
  double reward = 0.0;
  int candidate_f = -1;
  int candidate_g = -1;
  bool coin_heads = false;
  bool stopped = false;
  std::optional<int> recommendation;  // present iff stopped
};

// One decision step of the double-UCB algorithm: evaluate candidates, test
// the stopping rule before pulling, otherwise flip the biased coin and pull.
// forced_coin substitutes the coin outcome (test hook).
StepOutcome step(AlgState& state, const BanditInstance& env,
                 std::optional<bool> forced_coin = std::nullopt);

struct TrialResult {
  std::int64_t stopping_time = 0;  // t at which the rule fired (cap if censored)
  std::int64_t total_pulls = 0;
  double pseudo_regret = 0.0;    // sum of gaps of pulled arms
  double realized_regret = 0.0;  // sum of (best mean - observed reward)
  int recommended_arm = -1;      // original 0-based label
  bool correct = false;
  bool censored = false;
};

// Per-step trace for debugging and replay. Initialization pulls carry no
// candidate or index information (arm_f == -1, empty index vectors).
struct TraceStep {
  std::int64_t t = 0;
  int pulled_arm = -1;
  double reward = 0.0;
  int arm_f = -1;
  int arm_g = -1;
  bool stopped = false;
  std::vector<double> ucb_f, ucb_g, lcb_g;
};

struct Trace {
  int num_arms = 0;
  std::vector<TraceStep> steps;
};

// Full trial: pull each arm once, then iterate until the stopping rule fires
// or horizon_cap pulls are spent (censored; the current leader is still
// recommended but the trial is flagged).
TrialResult run(const BanditInstance& instance, double delta, RandomSource rng,
                std::int64_t horizon_cap, Trace* trace = nullptr);

TrialResult run_trial(AlgorithmKind kind, const BanditInstance& instance,
                      double delta, RandomSource rng, std::int64_t horizon_cap,
                      Trace* trace = nullptr);

}  // namespace bai
