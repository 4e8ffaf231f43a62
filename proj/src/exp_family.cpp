#include "bai/exp_family.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bai {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kKlTolerance = 1e-9;
constexpr int kMaxBisectIterations = 200;

[[noreturn]] void domain_fail(const char* msg) { throw std::domain_error(msg); }

// Bernoulli KL with arguments in [0,1]; boundary first argument uses the
// limit formulas kl(0,q) = ln(1/(1-q)), kl(1,q) = ln(1/q).
double kl_bernoulli_closure(double p, double q) {
  if (p == q) return 0.0;
  double value = 0.0;
  if (p > 0.0) {
    if (q <= 0.0) return kInf;
    value += p * std::log(p / q);
  }
  if (p < 1.0) {
    if (q >= 1.0) return kInf;
    value += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  }
  return value > 0.0 ? value : 0.0;
}

void check_in_closure(const RewardFamily& f, double x, const char* what) {
  if (!std::isfinite(x) && !(f.kind() == RewardFamily::Kind::kGaussian)) {
    domain_fail("kl: non-finite mean argument");
  }
  switch (f.kind()) {
    case RewardFamily::Kind::kBernoulli:
      if (!(x >= 0.0 && x <= 1.0)) domain_fail(what);
      break;
    case RewardFamily::Kind::kGaussian:
      if (!std::isfinite(x)) domain_fail(what);
      break;
    case RewardFamily::Kind::kPoisson:
    case RewardFamily::Kind::kExponential:
      if (!(x >= 0.0)) domain_fail(what);
      break;
  }
}

double variance_at(const RewardFamily& f, double mean) {
  switch (f.kind()) {
    case RewardFamily::Kind::kBernoulli:
      return mean * (1.0 - mean);
    case RewardFamily::Kind::kGaussian:
      return f.gaussian_variance();
    case RewardFamily::Kind::kPoisson:
      return mean;
    case RewardFamily::Kind::kExponential:
      return mean * mean;
  }
  return 0.0;
}

// Poisson draw via Knuth's product method; large means are split into
// independent chunks to keep exp(-lambda) away from underflow.
double sample_poisson(double lambda, RandomSource& rng) {
  double total = 0.0;
  while (lambda > 60.0) {
    total += sample_poisson(60.0, rng);
    lambda -= 60.0;
  }
  const double limit = std::exp(-lambda);
  double product = rng.uniform_open01();
  std::int64_t count = 0;
  while (product > limit) {
    product *= rng.uniform_open01();
    ++count;
  }
  return total + static_cast<double>(count);
}

}  // namespace

RewardFamily RewardFamily::Bernoulli() {
  return RewardFamily(Kind::kBernoulli, 0.0);
}

RewardFamily RewardFamily::GaussianFixedVariance(double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    domain_fail("Gaussian family requires a positive finite variance");
  }
  return RewardFamily(Kind::kGaussian, variance);
}

RewardFamily RewardFamily::Poisson() {
  return RewardFamily(Kind::kPoisson, 0.0);
}

RewardFamily RewardFamily::Exponential() {
  return RewardFamily(Kind::kExponential, 0.0);
}

double RewardFamily::gaussian_variance() const {
  if (kind_ != Kind::kGaussian) {
    domain_fail("gaussian_variance: family is not Gaussian");
  }
  return variance_;
}

double RewardFamily::mean_lower() const {
  switch (kind_) {
    case Kind::kBernoulli:
    case Kind::kPoisson:
    case Kind::kExponential:
      return 0.0;
    case Kind::kGaussian:
      return -kInf;
  }
  return 0.0;
}

double RewardFamily::mean_upper() const {
  return kind_ == Kind::kBernoulli ? 1.0 : kInf;
}

bool RewardFamily::contains(double mu) const {
  return std::isfinite(mu) && mu > mean_lower() && mu < mean_upper();
}

bool RewardFamily::admissible_empirical_mean(double mu) const {
  if (!std::isfinite(mu)) return false;
  switch (kind_) {
    case Kind::kBernoulli:
      return mu >= 0.0 && mu <= 1.0;
    case Kind::kGaussian:
      return true;
    case Kind::kPoisson:
      return mu >= 0.0;
    case Kind::kExponential:
      return mu > 0.0;
  }
  return false;
}

const char* RewardFamily::name() const {
  switch (kind_) {
    case Kind::kBernoulli:
      return "bernoulli";
    case Kind::kGaussian:
      return "gaussian";
    case Kind::kPoisson:
      return "poisson";
    case Kind::kExponential:
      return "exponential";
  }
  return "?";
}

double kl(const RewardFamily& family, double mu, double mu_prime) {
  check_in_closure(family, mu, "kl: first mean outside the closure of I");
  check_in_closure(family, mu_prime,
                   "kl: second mean outside the closure of I");
  switch (family.kind()) {
    case RewardFamily::Kind::kBernoulli:
      return kl_bernoulli_closure(mu, mu_prime);
    case RewardFamily::Kind::kGaussian: {
      const double d = mu - mu_prime;
      return d * d / (2.0 * family.gaussian_variance());
    }
    case RewardFamily::Kind::kPoisson: {
      if (mu == mu_prime) return 0.0;
      if (mu_prime <= 0.0) return kInf;  // mu > 0 here
      double value = mu_prime - mu;
      if (mu > 0.0) value += mu * std::log(mu / mu_prime);
      return value > 0.0 ? value : 0.0;
    }
    case RewardFamily::Kind::kExponential: {
      if (mu == mu_prime) return 0.0;
      if (mu <= 0.0 || mu_prime <= 0.0) return kInf;
      const double value = mu / mu_prime - 1.0 + std::log(mu_prime / mu);
      return value > 0.0 ? value : 0.0;
    }
  }
  return 0.0;
}

double kl_bernoulli(double p, double q) {
  if (!(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0)) {
    domain_fail("kl_bernoulli: arguments must lie strictly in (0,1)");
  }
  const double value =
      p * std::log(p / q) + (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  return value > 0.0 ? value : 0.0;
}

namespace {

void check_inverse_inputs(const RewardFamily& family, double mu_hat,
                          double budget) {
  if (!std::isfinite(budget) || budget < 0.0) {
    domain_fail("kl inverse: budget must be finite and nonnegative");
  }
  if (!family.admissible_empirical_mean(mu_hat)) {
    domain_fail("kl inverse: mu_hat is not an admissible empirical mean");
  }
}

}  // namespace

namespace {

// Largest x in [lo, hi] with kl(mu_hat, x) <= budget, given
// kl(mu_hat, lo) <= budget < kl(mu_hat, hi) and a bracket already tight
// enough for plain midpoint bisection.
double bisect_increasing(const RewardFamily& family, double mu_hat,
                         double budget, double lo, double hi) {
  for (int it = 0; it < kMaxBisectIterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double value = kl(family, mu_hat, mid);
    if (value <= budget) {
      lo = mid;
      if (budget - value <= kKlTolerance) break;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace

double kl_upper_inverse(const RewardFamily& family, double mu_hat,
                        double budget) {
  check_inverse_inputs(family, mu_hat, budget);
  if (budget == 0.0) return mu_hat;
  if (family.kind() == RewardFamily::Kind::kGaussian) {
    return mu_hat + std::sqrt(2.0 * family.gaussian_variance() * budget);
  }

  if (family.kind() == RewardFamily::Kind::kBernoulli) {
    if (mu_hat >= 1.0) return 1.0;
    // Roots can sit exponentially close to 1; halve the distance to the
    // endpoint until the divergence exceeds the budget, then bisect inside
    // the resulting factor-two bracket. Hitting the representability floor
    // first means every feasible point fits the budget: clamp to 1.
    double lo = mu_hat;
    double dist = 1.0 - mu_hat;
    for (int k = 0; k < 1200; ++k) {
      dist *= 0.5;
      const double probe = 1.0 - dist;
      if (probe <= lo) continue;
      if (probe >= 1.0) return 1.0;
      if (kl(family, mu_hat, probe) > budget) {
        return bisect_increasing(family, mu_hat, budget, lo, probe);
      }
      lo = probe;
    }
    return 1.0;
  }

  // Unbounded above: grow the bracket geometrically until kl exceeds the
  // budget.
  double offset = 1.0;
  double hi = mu_hat + offset;
  int growth = 0;
  while (kl(family, mu_hat, hi) <= budget) {
    offset *= 2.0;
    hi = mu_hat + offset;
    if (++growth > kMaxBisectIterations) {
      throw std::runtime_error("kl_upper_inverse: failed to bracket root");
    }
  }
  return bisect_increasing(family, mu_hat, budget, mu_hat, hi);
}

double kl_lower_inverse(const RewardFamily& family, double mu_hat,
                        double budget) {
  check_inverse_inputs(family, mu_hat, budget);
  if (budget == 0.0) return mu_hat;
  if (family.kind() == RewardFamily::Kind::kGaussian) {
    return mu_hat - std::sqrt(2.0 * family.gaussian_variance() * budget);
  }

  // Bernoulli, Poisson and Exponential means are bounded below by 0 with
  // kl(mu_hat, x) -> +inf as x -> 0+ for mu_hat > 0, but the root can be
  // exponentially close to 0; probe geometrically before bisecting.
  if (mu_hat <= 0.0) return 0.0;
  double hi = mu_hat;
  double probe = mu_hat;
  for (int k = 0; k < 1200; ++k) {
    probe *= 0.5;
    if (probe <= 0.0) return 0.0;  // below every representable mean
    const double value = kl(family, mu_hat, probe);
    if (value > budget) {
      // Smallest x with kl <= budget lies in [probe, hi]; bisect for it.
      double lo = probe;
      for (int it = 0; it < kMaxBisectIterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double v = kl(family, mu_hat, mid);
        if (v <= budget) {
          hi = mid;
          if (budget - v <= kKlTolerance) break;
        } else {
          lo = mid;
        }
      }
      return hi;
    }
    hi = probe;
  }
  return 0.0;
}

double sample(const RewardFamily& family, double mu, RandomSource& rng) {
  if (!family.contains(mu)) {
    domain_fail("sample: mean outside the family's mean interval");
  }
  switch (family.kind()) {
    case RewardFamily::Kind::kBernoulli:
      return rng.uniform01() < mu ? 1.0 : 0.0;
    case RewardFamily::Kind::kGaussian: {
      // Box-Muller; the second variate is discarded to keep one draw per
      // call independent of call history.
      const double u1 = rng.uniform_open01();
      const double u2 = rng.uniform01();
      const double radius = std::sqrt(-2.0 * std::log(u1));
      const double two_pi = 6.283185307179586476925286766559;
      return mu + std::sqrt(family.gaussian_variance()) * radius *
                      std::cos(two_pi * u2);
    }
    case RewardFamily::Kind::kPoisson:
      return sample_poisson(mu, rng);
    case RewardFamily::Kind::kExponential:
      return -mu * std::log(rng.uniform_open01());
  }
  return 0.0;
}

double variance_bound(const RewardFamily& family, double mean_lo,
                      double mean_hi) {
  if (!(mean_lo < mean_hi) || !family.contains(mean_lo) ||
      !family.contains(mean_hi)) {
    domain_fail("variance_bound: invalid mean range");
  }
  switch (family.kind()) {
    case RewardFamily::Kind::kBernoulli:
      if (mean_lo <= 0.5 && 0.5 <= mean_hi) return 0.25;
      return std::max(variance_at(family, mean_lo),
                      variance_at(family, mean_hi));
    case RewardFamily::Kind::kGaussian:
      return family.gaussian_variance();
    case RewardFamily::Kind::kPoisson:
    case RewardFamily::Kind::kExponential:
      return variance_at(family, mean_hi);
  }
  return 0.0;
}

}  // namespace bai
