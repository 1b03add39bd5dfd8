#include "relinfo/relative_information.hpp"

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

void require_n1(const StudyConfig& cfg, std::int64_t n1) {
  if (n1 < 0 || n1 > cfg.missing()) {
    throw DomainError("n1 must satisfy 0 <= n1 <= n - n0, got n1=" +
                      std::to_string(n1) +
                      " with n - n0 = " + std::to_string(cfg.missing()));
  }
}

// log(p/p0) and log((1-p)/(1-p0)) as a pair; every formula here is built
// from these two terms.
struct LogTerms {
  double success;  // log(p) - log(p0)
  double failure;  // log(1-p) - log(1-p0)
};

LogTerms log_terms(double p, double p0) {
  return {std::log(p) - std::log(p0), std::log1p(-p) - std::log1p(-p0)};
}

}  // namespace

StudyConfig::StudyConfig(std::int64_t n_in, std::int64_t n0_in,
                         std::int64_t x0_in, double p0_in)
    : n(n_in), n0(n0_in), x0(x0_in), p0(p0_in) {
  if (n0 < 1 || n0 > n) {
    throw DomainError("need 0 < n0 <= n, got n0=" + std::to_string(n0) +
                      " n=" + std::to_string(n));
  }
  if (x0 < 0 || x0 > n0) {
    throw DomainError("need 0 <= x0 <= n0, got x0=" + std::to_string(x0) +
                      " n0=" + std::to_string(n0));
  }
  require_probability(p0, "p0");
}

double complete_lod_variance(const StudyConfig& cfg, double p, double p1,
                             double p2) {
  require_probability(p, "p");
  require_probability(p1, "p1");
  require_probability(p2, "p2");
  const LogTerms t{std::log(p1) - std::log(p2),
                   std::log1p(-p1) - std::log1p(-p2)};
  const double bracket = t.success - t.failure;
  return static_cast<double>(cfg.missing()) * p * (1.0 - p) * bracket *
         bracket;
}

double expected_inverse_ri(const StudyConfig& cfg, double p, std::int64_t n1,
                           double eps_lod) {
  require_probability(p, "p");
  require_n1(cfg, n1);
  const double lod_ob = lod_fixed(cfg.observed(), p, cfg.p0).value;
  if (std::abs(lod_ob) < eps_lod) {
    throw InstabilityError("observed lod " + std::to_string(lod_ob) +
                           " is below the stability threshold");
  }
  const LogTerms t = log_terms(p, cfg.p0);
  const double per_value_gain = p * t.success + (1.0 - p) * t.failure;
  return 1.0 + static_cast<double>(n1) * per_value_gain / lod_ob;
}

double variance_inverse_ri(const StudyConfig& cfg, double p, std::int64_t n1,
                           double eps_lod) {
  require_probability(p, "p");
  require_n1(cfg, n1);
  const LogTerms t = log_terms(p, cfg.p0);
  const double bracket = t.success - t.failure;
  // A vanishing bracket (p == p0) makes every missing-value lod zero, so
  // the ratio is deterministic no matter how small the observed lod is.
  if (bracket == 0.0) return 0.0;
  const double lod_ob = lod_fixed(cfg.observed(), p, cfg.p0).value;
  if (std::abs(lod_ob) < eps_lod) {
    throw InstabilityError("observed lod " + std::to_string(lod_ob) +
                           " is below the stability threshold");
  }
  return static_cast<double>(n1) * p * (1.0 - p) * bracket * bracket /
         (lod_ob * lod_ob);
}

RelInfoSummary plugin_summary(const StudyConfig& cfg, std::int64_t n1,
                              const PluginOptions& options) {
  require_n1(cfg, n1);
  double p_hat = cfg.mle_observed();
  if (cfg.x0 == 0 || cfg.x0 == cfg.n0) {
    if (!options.continuity_correction) {
      throw BoundaryMleError("observed MLE is on the boundary (x0=" +
                             std::to_string(cfg.x0) + " of n0=" +
                             std::to_string(cfg.n0) +
                             "); enable the continuity correction to clamp");
    }
    const double half = 0.5 / static_cast<double>(cfg.n0);
    p_hat = (cfg.x0 == 0) ? half : 1.0 - half;
  }
  const double lod_ob = lod_fixed(cfg.observed(), p_hat, cfg.p0).value;
  if (std::abs(lod_ob) < options.eps_lod) {
    throw InstabilityError(
        "observed MLE equals the null probability; the observed lod is zero");
  }

  RelInfoSummary out;
  // Plug-in identity: the per-value gain is lod_ob/n0, so the expectation is
  // 1 + n1/n0 independent of x0 and p0.
  out.expected_inverse_ri =
      1.0 + static_cast<double>(n1) / static_cast<double>(cfg.n0);
  out.sd_inverse_ri =
      std::sqrt(variance_inverse_ri(cfg, p_hat, n1, options.eps_lod));
  out.plugin_ri1 = 1.0 / out.expected_inverse_ri;
  out.stable = true;
  out.lod_ob = LodScore{lod_ob, LogBase::natural, MleVsNull{p_hat, cfg.p0}};
  return out;
}

double equivalent_additional_individuals(double ri, std::int64_t n) {
  if (!(ri > 0.0) || !(ri <= 1.0)) {
    throw DomainError("relative information must lie in (0,1], got " +
                      std::to_string(ri));
  }
  return static_cast<double>(n) * (1.0 / ri - 1.0);
}

}  // namespace relinfo
