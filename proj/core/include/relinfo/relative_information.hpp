#pragma once

#include <cstdint>

#include "relinfo/binomial.hpp"

namespace relinfo {

// Observed lod scores below this (natural-log units) make information
// ratios meaningless: the division blows up on chance fluctuations.
inline constexpr double kEpsLod = 1e-9;

// One study variable: n individuals, n0 of them observed with x0 successes,
// tested against null success probability p0.
struct StudyConfig {
  StudyConfig(std::int64_t n, std::int64_t n0, std::int64_t x0, double p0);

  std::int64_t n;
  std::int64_t n0;
  std::int64_t x0;
  double p0;

  std::int64_t missing() const { return n - n0; }
  BinomialData observed() const { return BinomialData(x0, n0); }
  double mle_observed() const {
    return static_cast<double>(x0) / static_cast<double>(n0);
  }
};

// Plug-in estimate of the inverse relative information and its spread.
struct RelInfoSummary {
  double expected_inverse_ri = 1.0;
  double sd_inverse_ri = 0.0;
  double plugin_ri1 = 1.0;
  bool stable = true;
  LodScore lod_ob;
};

struct PluginOptions {
  // Clamp boundary MLEs to [1/(2*n0), 1 - 1/(2*n0)] instead of erroring.
  // Off by default: silently correcting changes reported estimates.
  bool continuity_correction = false;
  double eps_lod = kEpsLod;
};

// Conditional variance of the complete-data lod(p1, p2) given the observed
// block, under true success probability p:
//   (n - n0) * p * (1-p) * [log(p1/p2) - log((1-p1)/(1-p2))]^2
double complete_lod_variance(const StudyConfig& cfg, double p, double p1,
                             double p2);

// Expectation of the inverse relative information when n1 of the missing
// values are resolved, conditioning on the observed data:
//   1 + n1 * [p*log(p/p0) + (1-p)*log((1-p)/(1-p0))] / lod(p, p0; observed)
// Throws InstabilityError when the observed lod is within eps_lod of zero.
double expected_inverse_ri(const StudyConfig& cfg, double p, std::int64_t n1,
                           double eps_lod = kEpsLod);

// Variance of the inverse relative information under the same conditioning:
//   n1 * p * (1-p) * [log(p/p0) - log((1-p)/(1-p0))]^2 / lod(p, p0; obs)^2
double variance_inverse_ri(const StudyConfig& cfg, double p, std::int64_t n1,
                           double eps_lod = kEpsLod);

// Evaluates the two moments above at the observed MLE p = x0/n0. Under the
// plug-in the expectation collapses to 1 + n1/n0 exactly, so the full
// resolution estimate of the information fraction is n0/n.
RelInfoSummary plugin_summary(const StudyConfig& cfg, std::int64_t n1,
                              const PluginOptions& options = {});

// Number of new independent individuals with the same expected information
// as resolving everything: n * (1/ri - 1).
double equivalent_additional_individuals(double ri, std::int64_t n);

}  // namespace relinfo
