#pragma once

#include <cstdint>
#include <random>

namespace bai {

// Deterministic random stream. One instance is owned by one caller at a
// time; copies fork the stream state.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1]; safe to pass to log().
  double uniform_open01() {
    return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
  }

  std::uint64_t next_u64() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

// A canonical single-parameter exponential family of reward distributions,
// parameterized by its mean. Each kind carries an open interval of feasible
// means:
//   Bernoulli    (0, 1)
//   Gaussian     (-inf, inf)   with fixed, known variance
//   Poisson      (0, inf)
//   Exponential  (0, inf)      mean = 1/rate
class RewardFamily {
 public:
  enum class Kind { kBernoulli, kGaussian, kPoisson, kExponential };

  static RewardFamily Bernoulli();
  static RewardFamily GaussianFixedVariance(double variance);
  static RewardFamily Poisson();
  static RewardFamily Exponential();

  Kind kind() const { return kind_; }
  // Fixed variance of the Gaussian kind; throws for other kinds.
  double gaussian_variance() const;

  // Open endpoints of the mean interval (may be +-inf).
  double mean_lower() const;
  double mean_upper() const;

  // True iff mu lies strictly inside the mean interval.
  bool contains(double mu) const;

  // True iff mu is a reachable empirical mean: the closure boundary is
  // allowed where finitely many i.i.d. draws can attain it (Bernoulli 0/1,
  // Poisson 0); Exponential means are almost surely positive.
  bool admissible_empirical_mean(double mu) const;

  const char* name() const;

  friend bool operator==(const RewardFamily& a, const RewardFamily& b) {
    return a.kind_ == b.kind_ && a.variance_ == b.variance_;
  }
  friend bool operator!=(const RewardFamily& a, const RewardFamily& b) {
    return !(a == b);
  }

 private:
  RewardFamily(Kind kind, double variance) : kind_(kind), variance_(variance) {}

  Kind kind_;
  double variance_;  // meaningful for kGaussian only
};

// KL divergence between the family members with means mu and mu_prime.
// Both arguments must lie in the closure of the mean interval; boundary
// points evaluate to the corresponding limit (possibly +inf). Always >= 0,
// zero iff mu == mu_prime, strictly increasing in mu_prime above mu.
double kl(const RewardFamily& family, double mu, double mu_prime);

// Bernoulli KL, p ln(p/q) + (1-p) ln((1-p)/(1-q)), for p, q strictly in
// (0,1). Boundary arguments are a domain error here (use kl() with the
// Bernoulli family for empirical means of exactly 0 or 1).
double kl_bernoulli(double p, double q);

// sup{ mu in I : kl(mu_hat, mu) <= budget }. The interior root satisfies
// |kl(mu_hat, root) - budget| <= 1e-9; if the budget exceeds every
// achievable divergence the upper interval endpoint is returned
// (Bernoulli: 1).
double kl_upper_inverse(const RewardFamily& family, double mu_hat,
                        double budget);

// inf{ mu in I : kl(mu_hat, mu) <= budget }; mirror image of
// kl_upper_inverse (clamps to the lower endpoint).
double kl_lower_inverse(const RewardFamily& family, double mu_hat,
                        double budget);

// One i.i.d. draw with mean mu from the family's law.
double sample(const RewardFamily& family, double mu, RandomSource& rng);

// Supremum of the family variance over means in [mean_lo, mean_hi].
double variance_bound(const RewardFamily& family, double mean_lo,
                      double mean_hi);

}  // namespace bai
