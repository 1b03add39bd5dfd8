#pragma once

#include <cstdint>
#include <vector>

namespace relinfo {

// splitmix64 finalizer; full-period 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Counter-based uniform stream keyed by (seed, stream). Draw i depends only
// on the key and the counter, so replicate streams can be evaluated in any
// order or on any thread with identical results.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : base_(mix64(seed ^ mix64(stream ^ 0x5851F42D4C957F2Dull))) {}

  // Uniform in (0,1), 53 significant bits, never exactly 0 or 1.
  double next_uniform() {
    const std::uint64_t r = mix64(base_ + counter_++);
    return static_cast<double>(r >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

// Binomial(trials, p) sampling by CDF inversion against a precomputed
// table. One table serves any number of draws; a draw is a binary search.
class BinomialSampler {
 public:
  BinomialSampler(std::int64_t trials, double p);

  std::int64_t sample(double u) const;

  std::int64_t trials() const { return trials_; }

 private:
  std::int64_t trials_;
  std::vector<double> cdf_;  // cdf_[k] = P(X <= k), cdf_[trials] forced to 1
};

// Binomial probability mass, computed through lgamma in log space.
double binomial_pmf(std::int64_t trials, std::int64_t k, double p);

}  // namespace relinfo
