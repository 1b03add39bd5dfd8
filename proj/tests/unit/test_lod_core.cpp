#include <cmath>
#include <random>

#include <doctest.h>

#include "relinfo/binomial.hpp"
#include "relinfo/errors.hpp"

using namespace relinfo;

namespace {

// Independent oracle: the log-likelihood as a literal sum of one log term
// per trial.
double loglik_term_by_term(std::int64_t x, std::int64_t m, double p) {
  double sum = 0.0;
  for (std::int64_t i = 0; i < x; ++i) sum += std::log(p);
  for (std::int64_t i = 0; i < m - x; ++i) sum += std::log(1.0 - p);
  return sum;
}

}  // namespace

TEST_CASE("binomial data validates its invariants") {
  CHECK_THROWS_AS(BinomialData(-1, 10), DomainError);
  CHECK_THROWS_AS(BinomialData(11, 10), DomainError);
  CHECK_THROWS_AS(BinomialData(0, 0), DomainError);
  CHECK_NOTHROW(BinomialData(0, 1));
  CHECK_NOTHROW(BinomialData(10, 10));
}

TEST_CASE("binomial log-likelihood") {
  SUBCASE("all-failure case collapses to one term") {
    CHECK(binomial_loglik(BinomialData(0, 10), 0.5) ==
          doctest::Approx(10.0 * std::log(0.5)).epsilon(1e-14));
  }
  SUBCASE("symmetric p makes the value independent of x") {
    CHECK(binomial_loglik(BinomialData(5, 10), 0.5) ==
          doctest::Approx(10.0 * std::log(0.5)).epsilon(1e-14));
  }
  SUBCASE("matches the term-by-term summation oracle") {
    const double oracle = loglik_term_by_term(440, 800, 0.55);
    CHECK(binomial_loglik(BinomialData(440, 800), 0.55) ==
          doctest::Approx(oracle).epsilon(1e-13));
  }
  SUBCASE("base ten rescales by ln 10") {
    const BinomialData data(440, 800);
    CHECK(binomial_loglik(data, 0.55, LogBase::ten) * kLn10 ==
          doctest::Approx(binomial_loglik(data, 0.55)).epsilon(1e-14));
  }
  SUBCASE("boundary probabilities are rejected") {
    CHECK_THROWS_AS(binomial_loglik(BinomialData(1, 2), 0.0), DomainError);
    CHECK_THROWS_AS(binomial_loglik(BinomialData(1, 2), 1.0), DomainError);
  }
}

TEST_CASE("fixed-parameter lod score") {
  SUBCASE("identical parameters give zero") {
    CHECK(lod_fixed(BinomialData(3, 9), 0.3, 0.3).value == 0.0);
  }
  SUBCASE("worked value 440/800 at (0.55, 0.5)") {
    const LodScore lod = lod_fixed(BinomialData(440, 800), 0.55, 0.5);
    const double expected = 440.0 * std::log(1.1) + 360.0 * std::log(0.9);
    CHECK(lod.value == doctest::Approx(expected).epsilon(1e-13));
    CHECK(lod.value == doctest::Approx(4.00669347708546).epsilon(1e-10));
    // agrees with the log-likelihood difference
    const BinomialData data(440, 800);
    CHECK(lod.value ==
          doctest::Approx(binomial_loglik(data, 0.55) -
                          binomial_loglik(data, 0.5))
              .epsilon(1e-12));
    CHECK(std::holds_alternative<FixedPair>(lod.comparison));
  }
  SUBCASE("boundary probabilities are rejected") {
    CHECK_THROWS_AS(lod_fixed(BinomialData(1, 2), 0.0, 0.5), DomainError);
    CHECK_THROWS_AS(lod_fixed(BinomialData(1, 2), 0.5, 1.0), DomainError);
  }
}

TEST_CASE("lod score properties on random inputs") {
  std::mt19937 gen(7);
  std::uniform_int_distribution<std::int64_t> trials_dist(1, 200);
  std::uniform_real_distribution<double> p_dist(0.02, 0.98);

  for (int rep = 0; rep < 200; ++rep) {
    const std::int64_t m = trials_dist(gen);
    const std::int64_t x =
        std::uniform_int_distribution<std::int64_t>(0, m)(gen);
    const BinomialData data(x, m);
    const double p1 = p_dist(gen);
    const double p2 = p_dist(gen);

    // antisymmetry
    CHECK(lod_fixed(data, p1, p2).value ==
          doctest::Approx(-lod_fixed(data, p2, p1).value).epsilon(1e-12));
    // self-comparison vanishes
    CHECK(lod_fixed(data, p1, p1).value == 0.0);
    // base conversion is an exact rescale
    const LodScore natural = lod_fixed(data, p1, p2);
    CHECK(natural.in_base(LogBase::ten).value * kLn10 ==
          doctest::Approx(natural.value).epsilon(1e-12));
    CHECK(natural.in_base(LogBase::ten).in_base(LogBase::natural).value ==
          doctest::Approx(natural.value).epsilon(1e-12));
  }
}

TEST_CASE("lod additivity over concatenated samples") {
  std::mt19937 gen(11);
  std::uniform_int_distribution<std::int64_t> trials_dist(1, 500);
  std::uniform_real_distribution<double> p_dist(0.05, 0.95);
  for (int rep = 0; rep < 100; ++rep) {
    const std::int64_t m1 = trials_dist(gen);
    const std::int64_t m2 = trials_dist(gen);
    const std::int64_t a =
        std::uniform_int_distribution<std::int64_t>(0, m1)(gen);
    const std::int64_t b =
        std::uniform_int_distribution<std::int64_t>(0, m2)(gen);
    const double p1 = p_dist(gen), p2 = p_dist(gen);
    const double whole =
        lod_fixed(BinomialData(a, m1) + BinomialData(b, m2), p1, p2).value;
    const double parts = lod_fixed(BinomialData(a, m1), p1, p2).value +
                         lod_fixed(BinomialData(b, m2), p1, p2).value;
    CHECK(whole == doctest::Approx(parts).epsilon(1e-12));
  }
}

TEST_CASE("maximum-likelihood estimate") {
  CHECK(mle(BinomialData(440, 800)) == 0.55);
  CHECK(mle(BinomialData(0, 10)) == 0.0);
  CHECK(mle(BinomialData(550, 1000)) == 0.55);
  CHECK(mle(BinomialData(10, 10)) == 1.0);
}

TEST_CASE("MLE-vs-null lod score") {
  SUBCASE("MLE equal to the null gives zero") {
    CHECK(lod_mle_vs_null(BinomialData(500, 1000), 0.5).value == 0.0);
  }
  SUBCASE("worked value 440/800 vs 0.5") {
    const LodScore lod = lod_mle_vs_null(BinomialData(440, 800), 0.5);
    CHECK(lod.value == doctest::Approx(4.00669347708546).epsilon(1e-10));
    CHECK(std::holds_alternative<MleVsNull>(lod.comparison));
    CHECK(std::get<MleVsNull>(lod.comparison).p_hat == 0.55);
  }
  SUBCASE("boundary MLE uses the degenerate-fit limit") {
    CHECK(lod_mle_vs_null(BinomialData(0, 4), 0.5).value ==
          doctest::Approx(4.0 * std::log(2.0)).epsilon(1e-14));
    CHECK(lod_mle_vs_null(BinomialData(4, 4), 0.5).value ==
          doctest::Approx(4.0 * std::log(2.0)).epsilon(1e-14));
  }
  SUBCASE("nonnegative everywhere, zero only at the null") {
    std::mt19937 gen(13);
    std::uniform_int_distribution<std::int64_t> trials_dist(1, 100);
    std::uniform_real_distribution<double> p_dist(0.05, 0.95);
    for (int rep = 0; rep < 300; ++rep) {
      const std::int64_t m = trials_dist(gen);
      const std::int64_t x =
          std::uniform_int_distribution<std::int64_t>(0, m)(gen);
      const double p0 = p_dist(gen);
      const double value = lod_mle_vs_null(BinomialData(x, m), p0).value;
      CHECK(value >= 0.0);
      if (static_cast<double>(x) / static_cast<double>(m) == p0) {
        CHECK(value == 0.0);
      }
    }
  }
  SUBCASE("MLE dominates every fixed alternative") {
    const BinomialData data(7, 20);
    const double p_hat = mle(data);
    for (double q = 0.05; q < 1.0; q += 0.05) {
      CHECK(lod_fixed(data, p_hat, q).value >= -1e-12);
    }
  }
}
