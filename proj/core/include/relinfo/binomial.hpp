#pragma once

#include <cstdint>
#include <variant>

namespace relinfo {

// All lod values are computed in natural log; base ten is a display scaling.
enum class LogBase { natural, ten };

inline constexpr double kLn10 = 2.302585092994045684;

// Successes observed in a fixed number of Bernoulli trials.
struct BinomialData {
  BinomialData(std::int64_t successes, std::int64_t trials);

  std::int64_t successes;
  std::int64_t trials;
};

// Concatenation of two independent samples.
BinomialData operator+(const BinomialData& a, const BinomialData& b);

// The parameter pair a lod score compares: either two fixed probabilities,
// or the data MLE against a null value. Tagged so that fixed-parameter and
// MLE-based scores are never mixed silently.
struct FixedPair {
  double p1;
  double p2;
};

struct MleVsNull {
  double p_hat;
  double p0;
};

// A log likelihood-ratio value together with its log base and the
// comparison it encodes.
struct LodScore {
  double value = 0.0;
  LogBase log_base = LogBase::natural;
  std::variant<FixedPair, MleVsNull> comparison{FixedPair{0.5, 0.5}};

  // Rescales the value by ln(10); ratios of lod scores are base-invariant.
  LodScore in_base(LogBase target) const;
};

// Binomial log-likelihood x*log(p) + (m-x)*log(1-p), combinatorial constant
// dropped (it cancels in every ratio used here).
double binomial_loglik(const BinomialData& data, double p,
                       LogBase base = LogBase::natural);

// lod(p1, p2; data) = x*log(p1/p2) + (m-x)*log((1-p1)/(1-p2)), natural log.
LodScore lod_fixed(const BinomialData& data, double p1, double p2);

// Maximum-likelihood estimate x/m. Boundary values 0 and 1 are returned
// as-is; callers decide how to treat them.
double mle(const BinomialData& data);

// Traditional likelihood-ratio statistic: lod of the MLE against the null.
// Nonnegative by construction. Boundary MLEs are evaluated by the limit
// convention 0*log(0) = 0, which is the exact log-likelihood of the
// degenerate fit.
LodScore lod_mle_vs_null(const BinomialData& data, double p0);

}  // namespace relinfo
