#include "relinfo/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "relinfo/errors.hpp"

namespace relinfo {

namespace {

long double log_binomial_pmf(std::int64_t trials, std::int64_t k,
                             long double p) {
  const auto n = static_cast<long double>(trials);
  const auto kk = static_cast<long double>(k);
  return std::lgamma(n + 1.0L) - std::lgamma(kk + 1.0L) -
         std::lgamma(n - kk + 1.0L) + kk * std::log(p) +
         (n - kk) * std::log1p(-p);
}

}  // namespace

BinomialSampler::BinomialSampler(std::int64_t trials, double p)
    : trials_(trials) {
  if (trials < 0) {
    throw DomainError("trials must be >= 0, got " + std::to_string(trials));
  }
  if (!(p > 0.0) || !(p < 1.0)) {
    throw DomainError("p must lie strictly in (0,1), got " +
                      std::to_string(p));
  }
  cdf_.resize(static_cast<std::size_t>(trials) + 1);
  long double acc = 0.0L;
  for (std::int64_t k = 0; k <= trials; ++k) {
    acc += std::exp(log_binomial_pmf(trials, k, static_cast<long double>(p)));
    cdf_[static_cast<std::size_t>(k)] = static_cast<double>(acc);
  }
  // Swallow the ~1e-17 accumulation shortfall so u close to 1 stays in range.
  cdf_.back() = 1.0;
}

std::int64_t BinomialSampler::sample(double u) const {
  const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<std::int64_t>(it - cdf_.begin());
}

double binomial_pmf(std::int64_t trials, std::int64_t k, double p) {
  if (trials < 0 || k < 0 || k > trials) {
    throw DomainError("need 0 <= k <= trials");
  }
  if (!(p > 0.0) || !(p < 1.0)) {
    throw DomainError("p must lie strictly in (0,1), got " +
                      std::to_string(p));
  }
  if (trials == 0) return 1.0;
  return static_cast<double>(
      std::exp(log_binomial_pmf(trials, k, static_cast<long double>(p))));
}

}  // namespace relinfo
