#include "bai/instance.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace bai {

namespace {
constexpr double kTieTolerance = 1e-12;
}

BanditInstance::BanditInstance(RewardFamily family, std::vector<double> means)
    : family_(family), means_(std::move(means)), best_arm_(0) {
  if (means_.size() < 2) {
    throw std::invalid_argument("bandit instance requires at least two arms");
  }
  for (std::size_t i = 0; i < means_.size(); ++i) {
    if (!family_.contains(means_[i])) {
      throw std::domain_error(
          "bandit instance: arm " + std::to_string(i + 1) +
          " mean lies outside the open mean interval of the " +
          family_.name() + " family");
    }
  }
  for (std::size_t i = 1; i < means_.size(); ++i) {
    if (means_[i] > means_[best_arm_]) best_arm_ = static_cast<int>(i);
  }
  double second = -std::numeric_limits<double>::infinity();
  int runner_up = -1;
  for (std::size_t i = 0; i < means_.size(); ++i) {
    if (static_cast<int>(i) == best_arm_) continue;
    if (means_[i] > second) {
      second = means_[i];
      runner_up = static_cast<int>(i);
    }
  }
  if (means_[best_arm_] - second <= kTieTolerance) {
    throw std::domain_error(
        "bandit instance requires a unique best arm: arms " +
        std::to_string(best_arm_ + 1) + " and " + std::to_string(runner_up + 1) +
        " have means within 1e-12 of the maximum");
  }
}

std::vector<double> BanditInstance::gaps() const {
  std::vector<double> out(means_.size());
  const double top = best_mean();
  for (std::size_t i = 0; i < means_.size(); ++i) out[i] = top - means_[i];
  return out;
}

}  // namespace bai
