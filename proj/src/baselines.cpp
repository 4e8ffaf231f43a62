#include "bai/baselines.hpp"

namespace bai {

TrialResult run_klucb_stop(const BanditInstance& instance, double delta,
                           RandomSource rng, std::int64_t horizon_cap,
                           Trace* trace) {
  return run_trial(AlgorithmKind::kKlUcbStop, instance, delta, rng,
                   horizon_cap, trace);
}

TrialResult run_uniform_stop(const BanditInstance& instance, double delta,
                             RandomSource rng, std::int64_t horizon_cap,
                             Trace* trace) {
  return run_trial(AlgorithmKind::kUniformStop, instance, delta, rng,
                   horizon_cap, trace);
}

}  // namespace bai
