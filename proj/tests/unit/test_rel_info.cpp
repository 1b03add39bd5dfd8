#include <cmath>
#include <vector>

#include <doctest.h>

#include "relinfo/errors.hpp"
#include "relinfo/montecarlo.hpp"
#include "relinfo/relative_information.hpp"
#include "relinfo/rng.hpp"

using namespace relinfo;

namespace {

// Enumeration oracle for the missing-block lod variance: walk every
// possible completion, weight by exact binomial mass.
double enumerated_missing_lod_variance(std::int64_t n_mis, double p, double p1,
                                       double p2) {
  if (n_mis == 0) return 0.0;
  double mean = 0.0;
  std::vector<double> lods(static_cast<std::size_t>(n_mis) + 1);
  std::vector<double> masses(static_cast<std::size_t>(n_mis) + 1);
  for (std::int64_t k = 0; k <= n_mis; ++k) {
    masses[static_cast<std::size_t>(k)] = binomial_pmf(n_mis, k, p);
    lods[static_cast<std::size_t>(k)] =
        lod_fixed(BinomialData(k, n_mis), p1, p2).value;
    mean += masses[static_cast<std::size_t>(k)] *
            lods[static_cast<std::size_t>(k)];
  }
  double var = 0.0;
  for (std::int64_t k = 0; k <= n_mis; ++k) {
    const double d = lods[static_cast<std::size_t>(k)] - mean;
    var += masses[static_cast<std::size_t>(k)] * d * d;
  }
  return var;
}

}  // namespace

TEST_CASE("study config validates its invariants") {
  CHECK_THROWS_AS(StudyConfig(10, 0, 0, 0.5), DomainError);
  CHECK_THROWS_AS(StudyConfig(10, 11, 5, 0.5), DomainError);
  CHECK_THROWS_AS(StudyConfig(10, 8, 9, 0.5), DomainError);
  CHECK_THROWS_AS(StudyConfig(10, 8, 4, 0.0), DomainError);
  CHECK_NOTHROW(StudyConfig(10, 10, 4, 0.5));
}

TEST_CASE("complete-data lod variance") {
  const StudyConfig cfg(1000, 800, 440, 0.5);
  SUBCASE("identical parameters give zero") {
    CHECK(complete_lod_variance(cfg, 0.55, 0.4, 0.4) == 0.0);
  }
  SUBCASE("no missing values gives zero") {
    const StudyConfig complete(800, 800, 440, 0.5);
    CHECK(complete_lod_variance(complete, 0.55, 0.55, 0.5) == 0.0);
  }
  SUBCASE("matches enumeration over the missing block") {
    const double analytic = complete_lod_variance(cfg, 0.55, 0.55, 0.5);
    const double enumerated =
        enumerated_missing_lod_variance(200, 0.55, 0.55, 0.5);
    CHECK(analytic == doctest::Approx(enumerated).epsilon(1e-11));
  }
  SUBCASE("invariant under swapping the compared parameters") {
    CHECK(complete_lod_variance(cfg, 0.55, 0.55, 0.5) ==
          doctest::Approx(complete_lod_variance(cfg, 0.55, 0.5, 0.55))
              .epsilon(1e-13));
  }
}

TEST_CASE("expected inverse relative information") {
  const StudyConfig cfg(1000, 800, 440, 0.5);
  SUBCASE("resolving nothing changes nothing") {
    CHECK(expected_inverse_ri(cfg, 0.55, 0) == 1.0);
  }
  SUBCASE("equals n/n0 at the plug-in value") {
    CHECK(expected_inverse_ri(cfg, 0.55, 200) ==
          doctest::Approx(1.25).epsilon(1e-13));
  }
  SUBCASE("matches the enumeration oracle away from the plug-in") {
    const Moments oracle = exact_conditional_moments(cfg, 0.60);
    CHECK(expected_inverse_ri(cfg, 0.60, 200) ==
          doctest::Approx(oracle.mean).epsilon(1e-11));
  }
  SUBCASE("out-of-range n1 is rejected") {
    CHECK_THROWS_AS(expected_inverse_ri(cfg, 0.55, 201), DomainError);
    CHECK_THROWS_AS(expected_inverse_ri(cfg, 0.55, -1), DomainError);
  }
  SUBCASE("vanishing observed lod raises instability") {
    // x0/n0 = 0.55 = p: the observed lod at (p, p) is exactly zero
    CHECK_THROWS_AS(
        expected_inverse_ri(StudyConfig(1000, 800, 440, 0.55), 0.55, 10),
        InstabilityError);
  }
}

TEST_CASE("variance of the inverse relative information") {
  const StudyConfig cfg(1000, 800, 440, 0.5);
  SUBCASE("resolving nothing has no spread") {
    CHECK(variance_inverse_ri(cfg, 0.55, 0) == 0.0);
  }
  SUBCASE("bracket vanishes when p equals p0") {
    // At p = p0 the missing-value lods are identically zero, so the
    // inverse ratio is deterministic whatever the observed data say.
    const StudyConfig shifted(1000, 800, 440, 0.4);
    CHECK(variance_inverse_ri(shifted, 0.4, 200) == 0.0);
  }
  SUBCASE("matches the enumeration oracle") {
    const Moments oracle = exact_conditional_moments(cfg, 0.55);
    CHECK(variance_inverse_ri(cfg, 0.55, 200) ==
          doctest::Approx(oracle.variance).epsilon(1e-10));
  }
  SUBCASE("linear in n1") {
    const double v1 = variance_inverse_ri(cfg, 0.55, 1);
    for (std::int64_t n1 : {2, 17, 100, 200}) {
      CHECK(variance_inverse_ri(cfg, 0.55, n1) ==
            doctest::Approx(static_cast<double>(n1) * v1).epsilon(1e-12));
    }
  }
  SUBCASE("expectation is nondecreasing in n1 when gain and lod agree") {
    // x0/n0 = 0.6 = p: the observed lod and the per-value gain are both
    // positive, so more resolution means more expected information
    const StudyConfig aligned(1000, 800, 480, 0.5);
    double previous = expected_inverse_ri(aligned, 0.6, 0);
    for (std::int64_t n1 = 1; n1 <= 200; n1 += 7) {
      const double current = expected_inverse_ri(aligned, 0.6, n1);
      CHECK(current >= previous);
      previous = current;
    }
    // with x0/n0 = 0.55 the observed lod at (0.6, 0.5) is slightly
    // negative while the gain stays positive: opposite signs, decreasing
    CHECK(lod_fixed(cfg.observed(), 0.6, 0.5).value < 0.0);
    CHECK(expected_inverse_ri(cfg, 0.6, 200) <
          expected_inverse_ri(cfg, 0.6, 0));
  }
}

TEST_CASE("closed forms track the enumeration oracle across a grid") {
  for (std::int64_t n0 : {10, 80, 800}) {
    for (std::int64_t n_mis : {1, 20, 200}) {
      for (double frac : {0.2, 0.55, 0.7}) {
        for (double p : {0.3, 0.55, 0.6}) {
          for (double p0 : {0.4, 0.5}) {
            const auto x0 = static_cast<std::int64_t>(
                frac * static_cast<double>(n0));
            const StudyConfig cfg(n0 + n_mis, n0, x0, p0);
            const double lod_ob = lod_fixed(cfg.observed(), p, p0).value;
            if (std::abs(lod_ob) < 0.05) continue;  // stay in stable range
            const Moments oracle = exact_conditional_moments(cfg, p);
            const double mean = expected_inverse_ri(cfg, p, n_mis);
            const double var = variance_inverse_ri(cfg, p, n_mis);
            CHECK(std::abs(mean - oracle.mean) <=
                  1e-10 * std::max(1.0, std::abs(oracle.mean)));
            CHECK(std::abs(var - oracle.variance) <=
                  1e-10 * std::max(1.0, std::abs(oracle.variance)));
          }
        }
      }
    }
  }
}

TEST_CASE("plug-in summary") {
  SUBCASE("reproduces the 80% worked example") {
    const RelInfoSummary summary =
        plugin_summary(StudyConfig(1000, 800, 440, 0.5), 200);
    CHECK(summary.expected_inverse_ri == 1.25);
    CHECK(summary.plugin_ri1 == 0.8);
    CHECK(summary.stable);
    CHECK(summary.lod_ob.value ==
          doctest::Approx(4.00669347708546).epsilon(1e-10));
  }
  SUBCASE("complete data is the identity") {
    const RelInfoSummary summary =
        plugin_summary(StudyConfig(800, 800, 440, 0.5), 0);
    CHECK(summary.plugin_ri1 == 1.0);
    CHECK(summary.sd_inverse_ri == 0.0);
  }
  SUBCASE("expectation simplifies to 1 + n1/n0 exactly") {
    const RelInfoSummary summary =
        plugin_summary(StudyConfig(100, 80, 44, 0.5), 10);
    CHECK(summary.expected_inverse_ri == 1.125);
    // independent of x0 and p0
    for (std::int64_t x0 : {1, 13, 40, 79}) {
      for (double p0 : {0.2, 0.45, 0.7}) {
        if (static_cast<double>(x0) / 80.0 == p0) continue;
        const RelInfoSummary s =
            plugin_summary(StudyConfig(100, 80, x0, p0), 10);
        CHECK(std::abs(s.expected_inverse_ri - 1.125) <= 1e-12);
      }
    }
  }
  SUBCASE("full resolution lands on n0/n") {
    const RelInfoSummary summary =
        plugin_summary(StudyConfig(1000, 800, 317, 0.47), 200);
    CHECK(std::abs(summary.plugin_ri1 - 0.8) <= 1e-12);
  }
  SUBCASE("boundary MLE errors unless the correction is enabled") {
    const StudyConfig boundary(100, 80, 0, 0.5);
    CHECK_THROWS_AS(plugin_summary(boundary, 10), BoundaryMleError);
    PluginOptions corrected;
    corrected.continuity_correction = true;
    const RelInfoSummary summary = plugin_summary(boundary, 10, corrected);
    CHECK(summary.expected_inverse_ri == 1.125);
    CHECK(std::get<MleVsNull>(summary.lod_ob.comparison).p_hat ==
          doctest::Approx(1.0 / 160.0).epsilon(1e-14));
  }
  SUBCASE("MLE equal to the null is unstable") {
    CHECK_THROWS_AS(plugin_summary(StudyConfig(1000, 800, 400, 0.5), 200),
                    InstabilityError);
  }
}

TEST_CASE("relative-information quantities are log-base invariant") {
  const StudyConfig cfg(1000, 800, 440, 0.5);
  const double lod_nat = lod_fixed(cfg.observed(), 0.6, 0.5).value;
  const double lod_ten =
      lod_fixed(cfg.observed(), 0.6, 0.5).in_base(LogBase::ten).value;
  // the ratio-based quantity computed from base-ten lods matches the
  // natural-log computation
  const double gain_nat =
      0.6 * (std::log(0.6) - std::log(0.5)) +
      0.4 * (std::log(0.4) - std::log(0.5));
  const double expected_nat = 1.0 + 200.0 * gain_nat / lod_nat;
  const double expected_ten = 1.0 + 200.0 * (gain_nat / kLn10) / lod_ten;
  CHECK(expected_nat == doctest::Approx(expected_ten).epsilon(1e-12));
  CHECK(expected_inverse_ri(cfg, 0.6, 200) ==
        doctest::Approx(expected_nat).epsilon(1e-12));
}

TEST_CASE("equivalent additional individuals") {
  CHECK(equivalent_additional_individuals(0.8, 1000) == 250.0);
  CHECK(equivalent_additional_individuals(1.0, 1000) == 0.0);
  CHECK(equivalent_additional_individuals(0.5, 400) == 400.0);
  CHECK_THROWS_AS(equivalent_additional_individuals(0.0, 100), DomainError);
  CHECK_THROWS_AS(equivalent_additional_individuals(1.2, 100), DomainError);
}
