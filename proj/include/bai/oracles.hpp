#pragma once

#include <vector>

#include "bai/instance.hpp"

namespace bai {

// Hardness constant for regret-minimal identification,
//   I*(mu) = sum_{i != best} gap_i / kl(mu_i, mu_best).
// The optimal expected cumulative regret grows as I*(mu) ln(1/delta).
double hardness_i_star(const BanditInstance& instance);

// Finite-confidence regret floor: I*(mu) * kl_bernoulli(delta, 1-delta).
// No delta-correct identification strategy can beat it in expectation.
double regret_lower_bound(const BanditInstance& instance, double delta);

// Weighted two-arm transport cost,
//   phi(x, y) = min over lambda of x*kl(mu_top, lambda) + y*kl(mu_other, lambda),
// whose minimum is attained at lambda = (x*mu_top + y*mu_other)/(x + y).
// Requires x, y >= 0 with x + y > 0 and mu_top > mu_other.
struct PhiResult {
  double value;
  double argmin;
};
PhiResult phi(const RewardFamily& family, double x, double y, double mu_top,
              double mu_other);

// Result of the max-min sample-complexity program: the optimal pull
// proportions and the constant Gamma* such that no delta-correct strategy
// can stop in fewer than Gamma* ln(1/delta) expected samples.
struct OptimalWeights {
  std::vector<double> weights;  // original arm order, sums to 1
  double value;                 // Gamma*
};

// Solves sup_w inf_alt sum_i w_i kl(mu_i, lambda_i) by the transport
// equalization procedure: for each suboptimal arm j, g_j(x) = phi(1, x)
// increases from 0 to kl(mu_best, mu_j); a scalar bisection over the common
// transport level y finds the root of
//   F(y) = sum_j kl(mu_best, lambda_j)/kl(mu_j, lambda_j) = 1,
// and the weights follow as w proportional to (1, x_2(y), ..., x_K(y)).
// Note Gamma* diverges as the smallest gap goes to 0; gaps below 1e-6 are
// not supported.
OptimalWeights gamma_star(const BanditInstance& instance);

}  // namespace bai
