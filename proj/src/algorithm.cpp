#include "bai/algorithm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bai {

const char* algorithm_name(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::kDklUcb:
      return "dkl_ucb";
    case AlgorithmKind::kKlUcbStop:
      return "klucb_stop";
    case AlgorithmKind::kUniformStop:
      return "uniform_stop";
  }
  return "?";
}

double f_exploration(std::int64_t t) {
  if (t < 1) throw std::domain_error("f_exploration: t must be >= 1");
  return 3.0 * std::log(static_cast<double>(t));
}

double g_exploration(double delta, std::int64_t t, int num_arms) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::domain_error("g_exploration: delta must lie in (0,1)");
  }
  if (t < 1) throw std::domain_error("g_exploration: t must be >= 1");
  if (num_arms < 2) throw std::domain_error("g_exploration: need K >= 2");
  return std::log(2.0 * num_arms / delta) +
         2.0 * std::log(static_cast<double>(t));
}

double coin_bias(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::domain_error("coin_bias: delta must lie in (0,1)");
  }
  const double log_inv = std::log(1.0 / delta);
  if (log_inv <= 1.0) return 0.5;  // lnln(1/delta) <= 0: clamp
  const double gamma = std::log(log_inv);
  return 1.0 - std::min(1.0 / gamma, 0.5);
}

namespace {

struct IndexSet {
  std::vector<double> ucb_f;
  std::vector<double> ucb_g;
  std::vector<double> lcb_g;  // filled for all arms only when requested
};

void check_initialized(const AlgState& state) {
  if (state.num_arms < 2) throw std::domain_error("state: need K >= 2");
  for (int i = 0; i < state.num_arms; ++i) {
    if (state.counts[i] < 1) {
      throw std::domain_error("state: every arm needs at least one pull");
    }
  }
}

Candidates pick_candidates(const IndexSet& idx, int num_arms) {
  int arm_f = 0;
  for (int i = 1; i < num_arms; ++i) {
    if (idx.ucb_f[i] > idx.ucb_f[arm_f]) arm_f = i;
  }
  int arm_g = arm_f == 0 ? 1 : 0;
  for (int i = 0; i < num_arms; ++i) {
    if (i == arm_f) continue;
    if (idx.ucb_g[i] > idx.ucb_g[arm_g]) arm_g = i;
  }
  return {arm_f, arm_g};
}

// Indices for the decision at time t = state.t + 1, using statistics
// through state.t. The leader's g-LCB is needed for the stopping test; the
// full LCB vector is only materialized for traces.
IndexSet compute_indices(const AlgState& state, bool full_lcb) {
  const std::int64_t t = state.t + 1;
  const double f_budget_num = f_exploration(t);
  const double g_budget_num = g_exploration(state.delta, t, state.num_arms);
  IndexSet idx;
  idx.ucb_f.resize(state.num_arms);
  idx.ucb_g.resize(state.num_arms);
  if (full_lcb) idx.lcb_g.resize(state.num_arms);
  for (int i = 0; i < state.num_arms; ++i) {
    const double mean = state.empirical_mean(i);
    const double n = static_cast<double>(state.counts[i]);
    idx.ucb_f[i] = kl_upper_inverse(state.family, mean, f_budget_num / n);
    idx.ucb_g[i] = kl_upper_inverse(state.family, mean, g_budget_num / n);
    if (full_lcb) {
      idx.lcb_g[i] = kl_lower_inverse(state.family, mean, g_budget_num / n);
    }
  }
  return idx;
}

bool stop_from_indices(const AlgState& state, const IndexSet& idx,
                       const Candidates& c) {
  const double lcb_leader =
      idx.lcb_g.empty()
          ? kl_lower_inverse(
                state.family, state.empirical_mean(c.arm_f),
                g_exploration(state.delta, state.t + 1, state.num_arms) /
                    static_cast<double>(state.counts[c.arm_f]))
          : idx.lcb_g[c.arm_f];
  return lcb_leader > idx.ucb_g[c.arm_g];
}

StepOutcome advance(AlgorithmKind kind, AlgState& state,
                    const BanditInstance& env, std::optional<bool> forced_coin,
                    IndexSet* idx_out) {
  if (env.family() != state.family) {
    throw std::domain_error("step: environment family differs from state");
  }
  check_initialized(state);

  const IndexSet idx = compute_indices(state, idx_out != nullptr);
  const Candidates c = pick_candidates(idx, state.num_arms);

  StepOutcome out;
  out.candidate_f = c.arm_f;
  out.candidate_g = c.arm_g;
  if (idx_out) *idx_out = idx;

  if (stop_from_indices(state, idx, c)) {
    out.stopped = true;
    out.recommendation = c.arm_f;
    return out;
  }

  int arm = c.arm_f;
  switch (kind) {
    case AlgorithmKind::kDklUcb: {
      const bool heads = forced_coin.has_value()
                             ? *forced_coin
                             : state.rng.uniform01() < coin_bias(state.delta);
      out.coin_heads = heads;
      arm = heads ? c.arm_f : c.arm_g;
      break;
    }
    case AlgorithmKind::kKlUcbStop:
      out.coin_heads = true;
      arm = c.arm_f;
      break;
    case AlgorithmKind::kUniformStop:
      arm = static_cast<int>(state.t % state.num_arms);
      break;
  }

  out.pulled_arm = arm;
  out.reward = sample(env.family(), env.mean(arm), state.rng);
  state.counts[arm] += 1;
  state.sums[arm] += out.reward;
  state.t += 1;
  return out;
}

}  // namespace

double index_f(const AlgState& state, int arm) {
  return kl_upper_inverse(
      state.family, state.empirical_mean(arm),
      f_exploration(state.t + 1) / static_cast<double>(state.counts[arm]));
}

double index_g_upper(const AlgState& state, int arm) {
  return kl_upper_inverse(
      state.family, state.empirical_mean(arm),
      g_exploration(state.delta, state.t + 1, state.num_arms) /
          static_cast<double>(state.counts[arm]));
}

double index_g_lower(const AlgState& state, int arm) {
  return kl_lower_inverse(
      state.family, state.empirical_mean(arm),
      g_exploration(state.delta, state.t + 1, state.num_arms) /
          static_cast<double>(state.counts[arm]));
}

Candidates select_candidates(const AlgState& state) {
  check_initialized(state);
  return pick_candidates(compute_indices(state, false), state.num_arms);
}

bool should_stop(const AlgState& state, const Candidates& candidates) {
  return index_g_lower(state, candidates.arm_f) >
         index_g_upper(state, candidates.arm_g);
}

StepOutcome step(AlgState& state, const BanditInstance& env,
                 std::optional<bool> forced_coin) {
  return advance(AlgorithmKind::kDklUcb, state, env, forced_coin, nullptr);
}

TrialResult run(const BanditInstance& instance, double delta, RandomSource rng,
                std::int64_t horizon_cap, Trace* trace) {
  return run_trial(AlgorithmKind::kDklUcb, instance, delta, rng, horizon_cap,
                   trace);
}

TrialResult run_trial(AlgorithmKind kind, const BanditInstance& instance,
                      double delta, RandomSource rng, std::int64_t horizon_cap,
                      Trace* trace) {
  const int num_arms = instance.num_arms();
  if (horizon_cap < num_arms) {
    throw std::invalid_argument("run: horizon_cap must be at least K");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("run: delta must lie in (0,1)");
  }

  AlgState state(instance.family(), delta, num_arms, rng);
  TrialResult result;
  if (trace) {
    trace->num_arms = num_arms;
    trace->steps.clear();
  }

  const auto record_pull = [&](int arm, double reward) {
    result.pseudo_regret += instance.gap(arm);
    result.realized_regret += instance.best_mean() - reward;
  };

  for (int arm = 0; arm < num_arms; ++arm) {
    const double reward = sample(instance.family(), instance.mean(arm),
                                 state.rng);
    state.counts[arm] += 1;
    state.sums[arm] += reward;
    state.t += 1;
    record_pull(arm, reward);
    if (trace) {
      TraceStep ts;
      ts.t = state.t;
      ts.pulled_arm = arm;
      ts.reward = reward;
      trace->steps.push_back(std::move(ts));
    }
  }

  while (true) {
    if (state.t >= horizon_cap) {
      result.censored = true;
      result.stopping_time = state.t;
      result.recommended_arm = select_candidates(state).arm_f;
      break;
    }
    IndexSet idx;
    const StepOutcome out =
        advance(kind, state, instance, std::nullopt, trace ? &idx : nullptr);
    if (trace) {
      TraceStep ts;
      ts.t = out.stopped ? state.t + 1 : state.t;
      ts.pulled_arm = out.pulled_arm;
      ts.reward = out.reward;
      ts.arm_f = out.candidate_f;
      ts.arm_g = out.candidate_g;
      ts.stopped = out.stopped;
      ts.ucb_f = idx.ucb_f;
      ts.ucb_g = idx.ucb_g;
      ts.lcb_g = idx.lcb_g;
      trace->steps.push_back(std::move(ts));
    }
    if (out.stopped) {
      result.stopping_time = state.t + 1;
      result.recommended_arm = *out.recommendation;
      break;
    }
    record_pull(out.pulled_arm, out.reward);
  }

  result.total_pulls = state.t;
  result.correct = result.recommended_arm == instance.best_arm();
  return result;
}

}  // namespace bai
