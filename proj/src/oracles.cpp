#include "bai/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bai {

namespace {
constexpr int kMaxBisectIterations = 200;
constexpr double kRootTolerance = 1e-12;
}  // namespace

double hardness_i_star(const BanditInstance& instance) {
  const int best = instance.best_arm();
  const double top = instance.best_mean();
  double total = 0.0;
  for (int i = 0; i < instance.num_arms(); ++i) {
    if (i == best) continue;
    total += instance.gap(i) / kl(instance.family(), instance.mean(i), top);
  }
  return total;
}

double regret_lower_bound(const BanditInstance& instance, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::domain_error("regret_lower_bound: delta must lie in (0,1)");
  }
  if (delta == 0.5) return 0.0;  // kl_bernoulli(0.5, 0.5) == 0
  return hardness_i_star(instance) * kl_bernoulli(delta, 1.0 - delta);
}

PhiResult phi(const RewardFamily& family, double x, double y, double mu_top,
              double mu_other) {
  if (!(x >= 0.0) || !(y >= 0.0) || !std::isfinite(x) || !std::isfinite(y) ||
      x + y <= 0.0) {
    throw std::domain_error("phi: weights must be nonnegative with x + y > 0");
  }
  if (!(mu_top > mu_other) || !family.contains(mu_top) ||
      !family.contains(mu_other)) {
    throw std::domain_error("phi: requires mu_top > mu_other, both in I");
  }
  const double argmin = (x * mu_top + y * mu_other) / (x + y);
  const double value =
      x * kl(family, mu_top, argmin) + y * kl(family, mu_other, argmin);
  return {value, argmin};
}

namespace {

// Transport value against arm j at weight ratio x = w_j / w_best.
double transport_level(const BanditInstance& inst, int j, double x) {
  return phi(inst.family(), 1.0, x, inst.best_mean(), inst.mean(j)).value;
}

// Inverts transport_level in x for a target level y in (0, kl(mu1, mu_j)).
double invert_transport(const BanditInstance& inst, int j, double y) {
  double hi = 1.0;
  int growth = 0;
  while (transport_level(inst, j, hi) <= y) {
    hi *= 2.0;
    if (++growth > 400) {
      throw std::runtime_error("gamma_star: transport inversion failed");
    }
  }
  double lo = 0.0;
  for (int it = 0; it < kMaxBisectIterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double value = transport_level(inst, j, mid);
    if (value <= y) {
      lo = mid;
      if (y - value <= kRootTolerance) break;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace

OptimalWeights gamma_star(const BanditInstance& instance) {
  const int num_arms = instance.num_arms();
  const int best = instance.best_arm();
  const double top = instance.best_mean();
  const RewardFamily& family = instance.family();

  double y_max = std::numeric_limits<double>::infinity();
  for (int j = 0; j < num_arms; ++j) {
    if (j == best) continue;
    y_max = std::min(y_max, kl(family, top, instance.mean(j)));
  }

  // F(y) = sum_j kl(mu1, lambda_j)/kl(mu_j, lambda_j) rises from 0 to +inf
  // on (0, y_max); the optimum equalizes every per-arm transport at the
  // root of F(y) = 1.
  const auto ratio_sum = [&](double y, std::vector<double>* x_out) {
    double total = 0.0;
    for (int j = 0; j < num_arms; ++j) {
      if (j == best) continue;
      const double x = invert_transport(instance, j, y);
      if (x_out) (*x_out)[j] = x;
      const double lambda =
          (top + x * instance.mean(j)) / (1.0 + x);
      total += kl(family, top, lambda) / kl(family, instance.mean(j), lambda);
    }
    return total;
  };

  double y_lo = 0.0;
  double y_hi = y_max;
  for (int it = 0; it < kMaxBisectIterations; ++it) {
    const double mid = 0.5 * (y_lo + y_hi);
    if (mid <= y_lo || mid >= y_hi) break;
    if (ratio_sum(mid, nullptr) < 1.0) {
      y_lo = mid;
    } else {
      y_hi = mid;
    }
  }
  const double y_star = 0.5 * (y_lo + y_hi);
  if (!(y_star > 0.0) || !(y_star < y_max)) {
    throw std::runtime_error("gamma_star: transport bisection failed");
  }

  std::vector<double> x(num_arms, 0.0);
  ratio_sum(y_star, &x);

  double total = 1.0;
  for (int j = 0; j < num_arms; ++j) {
    if (j != best) total += x[j];
  }
  OptimalWeights out;
  out.weights.assign(num_arms, 0.0);
  out.weights[best] = 1.0 / total;
  for (int j = 0; j < num_arms; ++j) {
    if (j != best) out.weights[j] = x[j] / total;
  }

  // Gamma* = 1 / min_j per-arm transport value under the returned weights.
  double min_transport = std::numeric_limits<double>::infinity();
  for (int j = 0; j < num_arms; ++j) {
    if (j == best) continue;
    const double wb = out.weights[best];
    const double wj = out.weights[j];
    const double lambda = (wb * top + wj * instance.mean(j)) / (wb + wj);
    const double value = wb * kl(family, top, lambda) +
                         wj * kl(family, instance.mean(j), lambda);
    min_transport = std::min(min_transport, value);
  }
  if (!(min_transport > 0.0) || !std::isfinite(min_transport)) {
    throw std::runtime_error("gamma_star: degenerate transport value");
  }
  out.value = 1.0 / min_transport;
  return out;
}

}  // namespace bai
