#include "bai.h"

#include <cstring>
#include <stdexcept>
#include <string>

#include "bai/baselines.hpp"
#include "bai/harness.hpp"
#include "bai/oracles.hpp"
#include "bai/validate.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const char* msg) { g_last_error = msg ? msg : "unknown error"; }

bai_status status_from_current_exception() {
  try {
    throw;
  } catch (const std::domain_error& e) {
    set_error(e.what());
    return BAI_ERR_DOMAIN;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return BAI_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(e.what());
    return BAI_ERR_RUNTIME;
  } catch (...) {
    set_error("unknown error");
    return BAI_ERR_RUNTIME;
  }
}

template <typename Fn>
bai_status guarded(Fn&& fn) {
  try {
    fn();
    return BAI_OK;
  } catch (...) {
    return status_from_current_exception();
  }
}

bai::RewardFamily make_family(bai_family_kind kind, double gaussian_variance) {
  switch (kind) {
    case BAI_FAMILY_BERNOULLI:
      return bai::RewardFamily::Bernoulli();
    case BAI_FAMILY_GAUSSIAN:
      return bai::RewardFamily::GaussianFixedVariance(gaussian_variance);
    case BAI_FAMILY_POISSON:
      return bai::RewardFamily::Poisson();
    case BAI_FAMILY_EXPONENTIAL:
      return bai::RewardFamily::Exponential();
  }
  throw std::invalid_argument("unknown reward family kind");
}

bai::AlgorithmKind make_algorithm(bai_algorithm alg) {
  switch (alg) {
    case BAI_ALG_DKL_UCB:
      return bai::AlgorithmKind::kDklUcb;
    case BAI_ALG_KLUCB_STOP:
      return bai::AlgorithmKind::kKlUcbStop;
    case BAI_ALG_UNIFORM_STOP:
      return bai::AlgorithmKind::kUniformStop;
  }
  throw std::invalid_argument("unknown algorithm id");
}

template <typename T>
void require_out(const T* ptr, const char* what) {
  if (!ptr) throw std::invalid_argument(std::string("null pointer: ") + what);
}

}  // namespace

struct bai_instance {
  bai::BanditInstance inner;
};

struct bai_campaign {
  const bai_instance* instance = nullptr;
  std::vector<bai::AlgorithmKind> algorithms;
  std::vector<double> deltas;
  int trials = 1;
  std::uint64_t seed = 1;
  std::int64_t horizon_cap = 10000000;
  int parallelism = 1;
};

struct bai_result {
  bai::AggregateStats stats;
};

extern "C" {

const char* bai_version(void) { return BAI_VERSION; }

const char* bai_last_error(void) { return g_last_error.c_str(); }

const char* bai_algorithm_name(bai_algorithm alg) {
  switch (alg) {
    case BAI_ALG_DKL_UCB:
    case BAI_ALG_KLUCB_STOP:
    case BAI_ALG_UNIFORM_STOP:
      return bai::algorithm_name(static_cast<bai::AlgorithmKind>(alg));
  }
  return "?";
}

bai_status bai_kl(bai_family_kind kind, double gaussian_variance, double mu,
                  double mu_prime, double* out) {
  return guarded([&] {
    require_out(out, "out");
    *out = bai::kl(make_family(kind, gaussian_variance), mu, mu_prime);
  });
}

bai_status bai_kl_bernoulli(double p, double q, double* out) {
  return guarded([&] {
    require_out(out, "out");
    *out = bai::kl_bernoulli(p, q);
  });
}

bai_status bai_kl_upper_inverse(bai_family_kind kind, double gaussian_variance,
                                double mu_hat, double budget, double* out) {
  return guarded([&] {
    require_out(out, "out");
    *out = bai::kl_upper_inverse(make_family(kind, gaussian_variance), mu_hat,
                                 budget);
  });
}

bai_status bai_kl_lower_inverse(bai_family_kind kind, double gaussian_variance,
                                double mu_hat, double budget, double* out) {
  return guarded([&] {
    require_out(out, "out");
    *out = bai::kl_lower_inverse(make_family(kind, gaussian_variance), mu_hat,
                                 budget);
  });
}

bai_status bai_instance_create(bai_family_kind kind, double gaussian_variance,
                               const double* means, int num_arms,
                               bai_instance** out) {
  return guarded([&] {
    require_out(out, "out");
    require_out(means, "means");
    if (num_arms < 2) throw std::invalid_argument("need at least two arms");
    *out = new bai_instance{
        bai::BanditInstance(make_family(kind, gaussian_variance),
                            std::vector<double>(means, means + num_arms))};
  });
}

void bai_instance_free(bai_instance* instance) { delete instance; }

int bai_instance_num_arms(const bai_instance* instance) {
  return instance ? instance->inner.num_arms() : 0;
}

int bai_instance_best_arm(const bai_instance* instance) {
  return instance ? instance->inner.best_arm() : -1;
}

bai_status bai_instance_gaps(const bai_instance* instance, double* out) {
  return guarded([&] {
    require_out(instance, "instance");
    require_out(out, "out");
    const auto gaps = instance->inner.gaps();
    std::memcpy(out, gaps.data(), gaps.size() * sizeof(double));
  });
}

bai_status bai_hardness_i_star(const bai_instance* instance, double* out) {
  return guarded([&] {
    require_out(instance, "instance");
    require_out(out, "out");
    *out = bai::hardness_i_star(instance->inner);
  });
}

bai_status bai_regret_lower_bound(const bai_instance* instance, double delta,
                                  double* out) {
  return guarded([&] {
    require_out(instance, "instance");
    require_out(out, "out");
    *out = bai::regret_lower_bound(instance->inner, delta);
  });
}

bai_status bai_gamma_star(const bai_instance* instance, double* value_out,
                          double* weights_out) {
  return guarded([&] {
    require_out(instance, "instance");
    require_out(value_out, "value_out");
    require_out(weights_out, "weights_out");
    const bai::OptimalWeights ow = bai::gamma_star(instance->inner);
    *value_out = ow.value;
    std::memcpy(weights_out, ow.weights.data(),
                ow.weights.size() * sizeof(double));
  });
}

bai_status bai_phi(bai_family_kind kind, double gaussian_variance, double x,
                   double y, double mu_top, double mu_other, double* value_out,
                   double* argmin_out) {
  return guarded([&] {
    require_out(value_out, "value_out");
    require_out(argmin_out, "argmin_out");
    const bai::PhiResult res =
        bai::phi(make_family(kind, gaussian_variance), x, y, mu_top, mu_other);
    *value_out = res.value;
    *argmin_out = res.argmin;
  });
}

bai_status bai_run_trial(const bai_instance* instance, bai_algorithm alg,
                         double delta, uint64_t seed, int64_t horizon_cap,
                         bai_trial_result* out) {
  return guarded([&] {
    require_out(instance, "instance");
    require_out(out, "out");
    const bai::TrialResult r =
        bai::run_trial(make_algorithm(alg), instance->inner, delta,
                       bai::RandomSource(seed), horizon_cap);
    out->stopping_time = r.stopping_time;
    out->total_pulls = r.total_pulls;
    out->pseudo_regret = r.pseudo_regret;
    out->realized_regret = r.realized_regret;
    out->recommended_arm = r.recommended_arm;
    out->correct = r.correct ? 1 : 0;
    out->censored = r.censored ? 1 : 0;
  });
}

bai_status bai_campaign_create(const bai_instance* instance,
                               bai_campaign** out) {
  return guarded([&] {
    require_out(instance, "instance");
    require_out(out, "out");
    auto* campaign = new bai_campaign;
    campaign->instance = instance;
    *out = campaign;
  });
}

void bai_campaign_free(bai_campaign* campaign) { delete campaign; }

bai_status bai_campaign_add_algorithm(bai_campaign* campaign,
                                      bai_algorithm alg) {
  return guarded([&] {
    require_out(campaign, "campaign");
    campaign->algorithms.push_back(make_algorithm(alg));
  });
}

bai_status bai_campaign_add_delta(bai_campaign* campaign, double delta) {
  return guarded([&] {
    require_out(campaign, "campaign");
    campaign->deltas.push_back(delta);
  });
}

bai_status bai_campaign_set_trials(bai_campaign* campaign, int trials) {
  return guarded([&] {
    require_out(campaign, "campaign");
    campaign->trials = trials;
  });
}

bai_status bai_campaign_set_seed(bai_campaign* campaign, uint64_t seed) {
  return guarded([&] {
    require_out(campaign, "campaign");
    campaign->seed = seed;
  });
}

bai_status bai_campaign_set_horizon_cap(bai_campaign* campaign, int64_t cap) {
  return guarded([&] {
    require_out(campaign, "campaign");
    campaign->horizon_cap = cap;
  });
}

bai_status bai_campaign_set_parallelism(bai_campaign* campaign, int threads) {
  return guarded([&] {
    require_out(campaign, "campaign");
    campaign->parallelism = threads;
  });
}

namespace {

bai::ExperimentConfig to_config(const bai_campaign& campaign) {
  if (!campaign.instance) throw std::invalid_argument("campaign: no instance");
  bai::ExperimentConfig config{campaign.instance->inner,
                               campaign.algorithms,
                               campaign.deltas,
                               campaign.trials,
                               campaign.seed,
                               campaign.horizon_cap,
                               campaign.parallelism};
  return config;
}

void emit_trace(bai_trace_callback cb, void* user, bai::AlgorithmKind alg,
                double delta, const bai::Trace& trace) {
  for (const auto& ts : trace.steps) {
    bai_trace_step out;
    out.t = ts.t;
    out.pulled_arm = ts.pulled_arm;
    out.reward = ts.reward;
    out.arm_f = ts.arm_f;
    out.arm_g = ts.arm_g;
    out.stopped = ts.stopped ? 1 : 0;
    const bool has_indices = !ts.ucb_f.empty();
    out.ucb_f = has_indices ? ts.ucb_f.data() : nullptr;
    out.ucb_g = has_indices ? ts.ucb_g.data() : nullptr;
    out.lcb_g = has_indices ? ts.lcb_g.data() : nullptr;
    out.num_arms = trace.num_arms;
    cb(static_cast<bai_algorithm>(alg), delta, &out, user);
  }
}

}  // namespace

bai_status bai_campaign_run(const bai_campaign* campaign, bai_result** out) {
  return guarded([&] {
    require_out(campaign, "campaign");
    require_out(out, "out");
    *out = new bai_result{bai::run_campaign(to_config(*campaign))};
  });
}

bai_status bai_campaign_run_traced(const bai_campaign* campaign,
                                   bai_trace_callback trace_cb, void* user,
                                   bai_result** out) {
  return guarded([&] {
    require_out(campaign, "campaign");
    require_out(out, "out");
    require_out(reinterpret_cast<const void*>(trace_cb), "trace_cb");
    const auto sink = [&](bai::AlgorithmKind alg, double delta,
                          const bai::Trace& trace) {
      emit_trace(trace_cb, user, alg, delta, trace);
    };
    *out = new bai_result{bai::run_campaign(to_config(*campaign), sink)};
  });
}

int bai_result_num_cells(const bai_result* result) {
  return result ? static_cast<int>(result->stats.cells.size()) : 0;
}

bai_status bai_result_cell(const bai_result* result, int index,
                           bai_cell_stats* out) {
  return guarded([&] {
    require_out(result, "result");
    require_out(out, "out");
    if (index < 0 || index >= static_cast<int>(result->stats.cells.size())) {
      throw std::invalid_argument("cell index out of range");
    }
    const bai::CellStats& c = result->stats.cells[index];
    out->algorithm = static_cast<bai_algorithm>(c.algorithm);
    out->delta = c.delta;
    out->trials = c.trials;
    out->errors = c.errors;
    out->censored = c.censored;
    out->error_rate = c.error_rate;
    out->error_upper99 = c.error_upper99;
    out->mean_pseudo_regret = c.mean_pseudo_regret;
    out->var_pseudo_regret = c.var_pseudo_regret;
    out->mean_realized_regret = c.mean_realized_regret;
    out->var_realized_regret = c.var_realized_regret;
    out->mean_tau = c.mean_tau;
    out->var_tau = c.var_tau;
    out->regret_over_log = c.regret_over_log;
    out->regret_over_lower_bound = c.regret_over_lower_bound;
    out->tau_over_log = c.tau_over_log;
    out->tau_over_log_loglog_sq = c.tau_over_log_loglog_sq;
  });
}

void bai_result_free(bai_result* result) { delete result; }

bai_status bai_validate(const char* suite_filter, unsigned flags,
                        bai_validate_report report_cb, void* user,
                        int* all_passed_out) {
  return guarded([&] {
    require_out(all_passed_out, "all_passed_out");
    bai::ValidateOptions options;
    if (suite_filter) options.suite_filter = suite_filter;
    options.corrupt_kl = (flags & BAI_VALIDATE_CORRUPT_KL) != 0;
    const auto results = bai::run_validation(options);
    bool all = true;
    for (const auto& r : results) {
      all = all && r.passed;
      if (report_cb) {
        report_cb(r.name.c_str(), r.passed ? 1 : 0, r.millis,
                  r.detail.c_str(), user);
      }
    }
    *all_passed_out = all ? 1 : 0;
  });
}

}  // extern "C"
