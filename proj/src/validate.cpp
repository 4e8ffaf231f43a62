#include "bai/validate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "bai/baselines.hpp"
#include "bai/oracles.hpp"

namespace bai {

namespace {

using KlFn = std::function<double(const RewardFamily&, double, double)>;

struct CheckContext {
  KlFn kl_fn;
  std::ostringstream why;
  bool ok = true;

  void fail(const std::string& message) {
    if (ok) why << message;
    ok = false;
  }
};

std::vector<RewardFamily> all_families() {
  return {RewardFamily::Bernoulli(), RewardFamily::GaussianFixedVariance(1.0),
          RewardFamily::Poisson(), RewardFamily::Exponential()};
}

double random_mean(const RewardFamily& f, RandomSource& rng) {
  switch (f.kind()) {
    case RewardFamily::Kind::kBernoulli:
      return 0.01 + 0.98 * rng.uniform01();
    case RewardFamily::Kind::kGaussian:
      return -5.0 + 10.0 * rng.uniform01();
    case RewardFamily::Kind::kPoisson:
    case RewardFamily::Kind::kExponential:
      return 0.05 + 9.95 * rng.uniform01();
  }
  return 0.5;
}

// Nonnegativity, identity of indiscernibles, and the variance lower bound
// kl(mu, mu') >= (mu - mu')^2 / (2 V) with V the variance bound over the
// hull of the two means.
void suite_pinsker(CheckContext& ctx) {
  RandomSource rng(0x9db1ce5a11u);
  for (const auto& family : all_families()) {
    for (int i = 0; i < 10000 && ctx.ok; ++i) {
      const double a = random_mean(family, rng);
      const double b = random_mean(family, rng);
      const double value = ctx.kl_fn(family, a, b);
      if (!(value >= 0.0)) {
        ctx.fail(std::string("pinsker: negative divergence for ") +
                 family.name());
        return;
      }
      if (a == b) continue;
      if (ctx.kl_fn(family, a, a) > 1e-12) {
        ctx.fail("pinsker: kl(mu, mu) != 0");
        return;
      }
      const double lo = std::min(a, b);
      const double hi = std::max(a, b);
      const double v = variance_bound(family, lo, hi);
      const double bound = (a - b) * (a - b) / (2.0 * v);
      if (value < bound * (1.0 - 1e-9)) {
        std::ostringstream msg;
        msg << "pinsker: kl(" << a << ", " << b << ") = " << value
            << " below variance bound " << bound << " for " << family.name();
        ctx.fail(msg.str());
        return;
      }
    }
  }
}

// Inversion round trips: |kl(mu_hat, U) - c| <= 1e-9 for interior roots,
// ordering L <= mu_hat <= U, U nondecreasing in c, and U(c=0) = mu_hat.
void suite_kl_roundtrip(CheckContext& ctx) {
  RandomSource rng(0x5eed500fu);
  for (const auto& family : all_families()) {
    for (int i = 0; i < 10000 && ctx.ok; ++i) {
      const double mu_hat = random_mean(family, rng);
      const double budget = 5.0 * rng.uniform01();
      const double upper = kl_upper_inverse(family, mu_hat, budget);
      const double lower = kl_lower_inverse(family, mu_hat, budget);
      if (!(lower <= mu_hat && mu_hat <= upper)) {
        ctx.fail(std::string("kl_roundtrip: ordering violated for ") +
                 family.name());
        return;
      }
      if (kl_upper_inverse(family, mu_hat, 0.0) != mu_hat) {
        ctx.fail("kl_roundtrip: zero budget must return mu_hat");
        return;
      }
      const bool interior =
          upper < family.mean_upper() &&
          (family.kind() != RewardFamily::Kind::kBernoulli ||
           upper <= 1.0 - 1e-6);
      if (interior && budget > 0.0) {
        const double err = std::abs(ctx.kl_fn(family, mu_hat, upper) - budget);
        if (err > 1e-9) {
          std::ostringstream msg;
          msg << "kl_roundtrip: |kl - c| = " << err << " for "
              << family.name() << " at mu_hat=" << mu_hat << " c=" << budget;
          ctx.fail(msg.str());
          return;
        }
      }
      const double upper2 = kl_upper_inverse(family, mu_hat, budget * 1.5);
      if (upper2 + 1e-12 < upper) {
        ctx.fail("kl_roundtrip: upper inverse not monotone in c");
        return;
      }
    }
  }
}

// phi against a brute-force lambda grid, plus monotonicity and the
// large-x limit phi(x, y) -> y kl(mu_other, mu_top).
void suite_phi(CheckContext& ctx) {
  const auto family = RewardFamily::Bernoulli();
  const double mu_top = 0.6;
  const double mu_other = 0.4;
  RandomSource rng(0xf1a5u);
  for (int i = 0; i < 200 && ctx.ok; ++i) {
    const double x = 0.01 + 5.0 * rng.uniform01();
    const double y = 0.01 + 5.0 * rng.uniform01();
    const PhiResult res = phi(family, x, y, mu_top, mu_other);
    double grid_min = std::numeric_limits<double>::infinity();
    for (int g = 1; g <= 99; ++g) {
      const double lambda = g / 100.0;
      grid_min = std::min(grid_min, x * ctx.kl_fn(family, mu_top, lambda) +
                                        y * ctx.kl_fn(family, mu_other,
                                                      lambda));
    }
    if (res.value > grid_min + 1e-9) {
      ctx.fail("phi: closed-form minimum above brute-force grid minimum");
      return;
    }
    const PhiResult bigger = phi(family, x * 1.25, y, mu_top, mu_other);
    if (bigger.value + 1e-12 < res.value) {
      ctx.fail("phi: not nondecreasing in x");
      return;
    }
  }
  const double limit = phi(family, 1e6, 1.0, mu_top, mu_other).value;
  const double target = kl(family, mu_other, mu_top);
  if (std::abs(limit - target) > 0.01 * target) {
    ctx.fail("phi: large-x limit misses kl(mu_other, mu_top)");
  }
}

// Closed forms and a simplex grid check for the max-min weights.
void suite_gamma(CheckContext& ctx) {
  {
    const BanditInstance inst(RewardFamily::GaussianFixedVariance(1.0),
                              {1.0, 0.0});
    const OptimalWeights ow = gamma_star(inst);
    if (std::abs(ow.value - 8.0) > 8.0 * 1e-6 ||
        std::abs(ow.weights[0] - 0.5) > 1e-6) {
      ctx.fail("gamma: two-armed Gaussian closed form (8, 1/2) missed");
      return;
    }
  }
  {
    const BanditInstance inst(RewardFamily::Bernoulli(), {0.7, 0.3});
    const OptimalWeights ow = gamma_star(inst);
    if (std::abs(ow.weights[0] - 0.5) > 1e-4) {
      ctx.fail("gamma: symmetric Bernoulli weights not uniform");
      return;
    }
  }
  const BanditInstance inst(RewardFamily::Bernoulli(), {0.5, 0.4, 0.3});
  const OptimalWeights ow = gamma_star(inst);
  double best = 0.0;
  const int steps = 1000;
  for (int i = 1; i < steps; ++i) {
    for (int j = 1; j < steps - i; ++j) {
      const double w1 = i / static_cast<double>(steps);
      const double w2 = j / static_cast<double>(steps);
      const double w3 = 1.0 - w1 - w2;
      const double v2 = phi(inst.family(), w1, w2, 0.5, 0.4).value;
      const double v3 = phi(inst.family(), w1, w3, 0.5, 0.3).value;
      best = std::max(best, std::min(v2, v3));
    }
  }
  const double grid_gamma = 1.0 / best;
  if (std::abs(ow.value - grid_gamma) > 1e-3 * grid_gamma) {
    std::ostringstream msg;
    msg << "gamma: solver " << ow.value << " vs grid " << grid_gamma;
    ctx.fail(msg.str());
  }
}

void suite_stopping(CheckContext& ctx) {
  const BanditInstance bern(RewardFamily::Bernoulli(), {0.7, 0.35});
  const BanditInstance gauss(RewardFamily::GaussianFixedVariance(1.0),
                             {1.0, 0.0, -0.5});
  const std::vector<const BanditInstance*> instances = {&bern, &gauss};
  const std::vector<AlgorithmKind> algorithms = {AlgorithmKind::kDklUcb,
                                                 AlgorithmKind::kKlUcbStop,
                                                 AlgorithmKind::kUniformStop};
  int replayed = 0;
  for (const auto* inst : instances) {
    for (const auto alg : algorithms) {
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        Trace trace;
        const TrialResult r = run_trial(alg, *inst, 0.1, RandomSource(seed),
                                        1000000, &trace);
        if (r.censored) {
          ctx.fail("stopping: unexpected censored validation trial");
          return;
        }
        std::string why;
        if (!replay_confirms_stop(*inst, 0.1, trace, &why)) {
          ctx.fail("stopping: replay mismatch: " + why);
          return;
        }
        ++replayed;
      }
    }
  }
  std::ostringstream msg;
  msg << replayed << " traces replayed";
  ctx.why << msg.str();
}

struct SuiteEntry {
  const char* name;
  void (*fn)(CheckContext&);
};

const SuiteEntry kSuites[] = {
    {"pinsker", suite_pinsker},
    {"kl_roundtrip", suite_kl_roundtrip},
    {"phi", suite_phi},
    {"gamma", suite_gamma},
    {"stopping", suite_stopping},
};

}  // namespace

std::vector<std::string> validation_suite_names() {
  std::vector<std::string> names;
  for (const auto& entry : kSuites) names.emplace_back(entry.name);
  return names;
}

std::vector<SuiteResult> run_validation(const ValidateOptions& options) {
  KlFn kl_fn = [](const RewardFamily& f, double a, double b) {
    return kl(f, a, b);
  };
  if (options.corrupt_kl) {
    kl_fn = [](const RewardFamily& f, double a, double b) {
      return -kl(f, a, b);
    };
  }

  std::vector<SuiteResult> results;
  for (const auto& entry : kSuites) {
    if (!options.suite_filter.empty() && options.suite_filter != entry.name) {
      continue;
    }
    CheckContext ctx{kl_fn, {}, true};
    const auto start = std::chrono::steady_clock::now();
    entry.fn(ctx);
    const auto end = std::chrono::steady_clock::now();
    SuiteResult res;
    res.name = entry.name;
    res.passed = ctx.ok;
    res.millis =
        std::chrono::duration<double, std::milli>(end - start).count();
    res.detail = ctx.why.str();
    results.push_back(std::move(res));
  }
  if (results.empty()) {
    SuiteResult res;
    res.name = options.suite_filter;
    res.passed = false;
    res.detail = "unknown suite";
    results.push_back(std::move(res));
  }
  return results;
}

bool replay_confirms_stop(const BanditInstance& instance, double delta,
                          const Trace& trace, std::string* why) {
  const auto fail = [&](const std::string& message) {
    if (why) *why = message;
    return false;
  };
  const int num_arms = instance.num_arms();
  if (trace.steps.size() < static_cast<std::size_t>(num_arms) + 1) {
    return fail("trace too short");
  }

  AlgState state(instance.family(), delta, num_arms, RandomSource(0));
  for (int i = 0; i < num_arms; ++i) {
    const TraceStep& ts = trace.steps[i];
    if (ts.pulled_arm != i) return fail("initialization pulls out of order");
    state.counts[i] += 1;
    state.sums[i] += ts.reward;
    state.t += 1;
  }

  for (std::size_t s = num_arms; s < trace.steps.size(); ++s) {
    const TraceStep& ts = trace.steps[s];
    const Candidates c = select_candidates(state);
    if (c.arm_f != ts.arm_f || c.arm_g != ts.arm_g) {
      return fail("candidate mismatch at t=" + std::to_string(state.t + 1));
    }
    const bool stop = should_stop(state, c);
    const bool last = s + 1 == trace.steps.size();
    if (last) {
      if (!ts.stopped) return fail("trace does not end with a stop");
      if (!stop) return fail("stopping inequality fails at tau");
      return true;
    }
    if (stop) {
      return fail("stopping inequality already holds at t=" +
                  std::to_string(state.t + 1));
    }
    if (ts.pulled_arm < 0) return fail("missing pull before tau");
    state.counts[ts.pulled_arm] += 1;
    state.sums[ts.pulled_arm] += ts.reward;
    state.t += 1;
  }
  return fail("unreachable");
}

}  // namespace bai
