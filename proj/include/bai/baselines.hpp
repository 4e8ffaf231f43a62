#pragma once

#include "bai/algorithm.hpp"

namespace bai {

// Comparison strategies sharing the double-UCB index and stopping code;
// only the pull rule differs.

// Pure f-UCB sampling (always pull the f-UCB leader) with the same g-based
// stopping rule. Its stopping time scales like 1/delta rather than
// ln(1/delta): the leader rule grants the runner-up only ~f(t)/kl pulls,
// and 3 ln t overtakes the g threshold ln(2Kt^2/delta) no sooner than
// t ~ 2K/delta.
TrialResult run_klucb_stop(const BanditInstance& instance, double delta,
                           RandomSource rng, std::int64_t horizon_cap,
                           Trace* trace = nullptr);

// Round-robin sampling with the same stopping rule; counts differ by at
// most one across arms at all times.
TrialResult run_uniform_stop(const BanditInstance& instance, double delta,
                             RandomSource rng, std::int64_t horizon_cap,
                             Trace* trace = nullptr);

}  // namespace bai
