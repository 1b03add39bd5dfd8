#include "relinfo/binomial.hpp"

#include <cmath>
#include <string>

#include "relinfo/errors.hpp"

namespace relinfo {

namespace {

void require_probability(double p, const char* name) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw DomainError(std::string(name) + " must lie strictly in (0,1), got " +
                      std::to_string(p));
  }
}

}  // namespace

BinomialData::BinomialData(std::int64_t successes_in, std::int64_t trials_in)
    : successes(successes_in), trials(trials_in) {
  if (trials < 1) {
    throw DomainError("trials must be >= 1, got " + std::to_string(trials));
  }
  if (successes < 0 || successes > trials) {
    throw DomainError("successes must satisfy 0 <= x <= trials, got x=" +
                      std::to_string(successes) +
                      " trials=" + std::to_string(trials));
  }
}

BinomialData operator+(const BinomialData& a, const BinomialData& b) {
  return BinomialData(a.successes + b.successes, a.trials + b.trials);
}

LodScore LodScore::in_base(LogBase target) const {
  if (target == log_base) return *this;
  LodScore out = *this;
  out.log_base = target;
  out.value = (target == LogBase::ten) ? value / kLn10 : value * kLn10;
  return out;
}

double binomial_loglik(const BinomialData& data, double p, LogBase base) {
  require_probability(p, "p");
  const double x = static_cast<double>(data.successes);
  const double m = static_cast<double>(data.trials);
  const double v = x * std::log(p) + (m - x) * std::log1p(-p);
  return base == LogBase::ten ? v / kLn10 : v;
}

LodScore lod_fixed(const BinomialData& data, double p1, double p2) {
  require_probability(p1, "p1");
  require_probability(p2, "p2");
  const double x = static_cast<double>(data.successes);
  const double m = static_cast<double>(data.trials);
  const double value = x * (std::log(p1) - std::log(p2)) +
                       (m - x) * (std::log1p(-p1) - std::log1p(-p2));
  return LodScore{value, LogBase::natural, FixedPair{p1, p2}};
}

double mle(const BinomialData& data) {
  return static_cast<double>(data.successes) /
         static_cast<double>(data.trials);
}

LodScore lod_mle_vs_null(const BinomialData& data, double p0) {
  require_probability(p0, "p0");
  const double p_hat = mle(data);
  const double m = static_cast<double>(data.trials);
  double value;
  if (data.successes == 0) {
    value = -m * std::log1p(-p0);
  } else if (data.successes == data.trials) {
    value = -m * std::log(p0);
  } else {
    value = lod_fixed(data, p_hat, p0).value;
  }
  // The MLE maximizes the likelihood, so the statistic is >= 0; clamp the
  // last-ulp rounding noise.
  if (value < 0.0) value = 0.0;
  return LodScore{value, LogBase::natural, MleVsNull{p_hat, p0}};
}

}  // namespace relinfo
