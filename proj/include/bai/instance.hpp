#pragma once

#include <vector>

#include "bai/exp_family.hpp"

namespace bai {

// A bandit instance: a reward family plus a mean vector with a unique best
// arm. Arms keep their original (0-based) labels; the best arm's index is
// resolved at construction. Ties at the maximum within 1e-12 are rejected,
// since two arms with identical means cannot be told apart.
class BanditInstance {
 public:
  BanditInstance(RewardFamily family, std::vector<double> means);

  const RewardFamily& family() const { return family_; }
  int num_arms() const { return static_cast<int>(means_.size()); }
  const std::vector<double>& means() const { return means_; }
  double mean(int arm) const { return means_[arm]; }

  int best_arm() const { return best_arm_; }
  double best_mean() const { return means_[best_arm_]; }

  // Suboptimality gaps, best_mean - mean_i, in original arm order.
  std::vector<double> gaps() const;
  double gap(int arm) const { return best_mean() - means_[arm]; }

 private:
  RewardFamily family_;
  std::vector<double> means_;
  int best_arm_;
};

}  // namespace bai
