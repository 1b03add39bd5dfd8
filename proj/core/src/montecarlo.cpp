#include "relinfo/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "relinfo/errors.hpp"
#include "relinfo/rng.hpp"

namespace relinfo {

namespace {

void require_probability(double p, const char* name) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw DomainError(std::string(name) + " must lie strictly in (0,1), got " +
                      std::to_string(p));
  }
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const auto m = sorted.size();
  if (m == 1) return sorted[0];
  const double h = q * static_cast<double>(m - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= m) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

SimConfig::SimConfig(std::int64_t n_in, std::int64_t n0_in, double true_p_in,
                     double p0_in, std::int64_t replicates_in,
                     std::uint64_t seed_in)
    : n(n_in),
      n0(n0_in),
      true_p(true_p_in),
      p0(p0_in),
      replicates(replicates_in),
      seed(seed_in) {
  if (n0 < 1 || n0 > n) {
    throw DomainError("need 0 < n0 <= n, got n0=" + std::to_string(n0) +
                      " n=" + std::to_string(n));
  }
  require_probability(true_p, "true_p");
  require_probability(p0, "p0");
  if (replicates < 1) {
    throw DomainError("replicates must be >= 1");
  }
}

JointSample simulate_joint_lod(const SimConfig& cfg, int threads) {
  const std::int64_t n_mis = cfg.n - cfg.n0;
  const BinomialSampler sample_ob(cfg.n0, cfg.true_p);
  const BinomialSampler sample_mis(n_mis, cfg.true_p);

  JointSample out{cfg, std::vector<LodPair>(
                           static_cast<std::size_t>(cfg.replicates))};

  auto worker = [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      CounterRng rng(cfg.seed, static_cast<std::uint64_t>(i));
      const std::int64_t x_ob = sample_ob.sample(rng.next_uniform());
      const std::int64_t x_mis = sample_mis.sample(rng.next_uniform());
      const double lod_ob =
          lod_mle_vs_null(BinomialData(x_ob, cfg.n0), cfg.p0).value;
      const double lod_co =
          lod_mle_vs_null(BinomialData(x_ob + x_mis, cfg.n), cfg.p0).value;
      out.pairs[static_cast<std::size_t>(i)] = LodPair{lod_ob, lod_co};
    }
  };

  threads = std::clamp(threads, 1, 256);
  if (threads == 1 || cfg.replicates < 2 * threads) {
    worker(0, cfg.replicates);
    return out;
  }

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  const std::int64_t chunk = (cfg.replicates + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const std::int64_t begin = t * chunk;
    const std::int64_t end = std::min(begin + chunk, cfg.replicates);
    if (begin >= end) break;
    pool.emplace_back(worker, begin, end);
  }
  for (auto& th : pool) th.join();
  return out;
}

RatioStats empirical_ratio_stats(const JointSample& sample,
                                 double ratio_floor) {
  if (!(ratio_floor > 0.0)) {
    throw DomainError("ratio_floor must be positive");
  }
  std::vector<double> ratios;
  ratios.reserve(sample.pairs.size());
  for (const auto& pair : sample.pairs) {
    if (pair.lod_ob >= ratio_floor) {
      ratios.push_back(pair.lod_co / pair.lod_ob);
    }
  }
  if (ratios.empty()) {
    throw AllExcludedError("every pair has observed lod below the floor " +
                           std::to_string(ratio_floor));
  }

  RatioStats stats;
  stats.included = static_cast<std::int64_t>(ratios.size());
  stats.excluded =
      static_cast<std::int64_t>(sample.pairs.size()) - stats.included;

  double sum = 0.0;
  for (double r : ratios) sum += r;
  stats.mean = sum / static_cast<double>(ratios.size());
  if (ratios.size() > 1) {
    double ss = 0.0;
    for (double r : ratios) {
      const double d = r - stats.mean;
      ss += d * d;
    }
    stats.sd = std::sqrt(ss / static_cast<double>(ratios.size() - 1));
  }

  std::sort(ratios.begin(), ratios.end());
  stats.max = ratios.back();
  stats.q50 = quantile_sorted(ratios, 0.50);
  stats.q90 = quantile_sorted(ratios, 0.90);
  stats.q99 = quantile_sorted(ratios, 0.99);
  return stats;
}

std::vector<double> conditional_simulate(const StudyConfig& cfg, double true_p,
                                         std::int64_t replicates,
                                         std::uint64_t seed, double eps_lod) {
  require_probability(true_p, "true_p");
  if (replicates < 1) throw DomainError("replicates must be >= 1");

  const double lod_ob = lod_fixed(cfg.observed(), true_p, cfg.p0).value;
  if (std::abs(lod_ob) < eps_lod) {
    throw InstabilityError("observed lod " + std::to_string(lod_ob) +
                           " is below the stability threshold");
  }

  const std::int64_t n_mis = cfg.missing();
  std::vector<double> out(static_cast<std::size_t>(replicates), 1.0);
  if (n_mis == 0) return out;

  const BinomialSampler sample_mis(n_mis, true_p);
  for (std::int64_t i = 0; i < replicates; ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    const std::int64_t x_mis = sample_mis.sample(rng.next_uniform());
    const double lod_mis =
        lod_fixed(BinomialData(x_mis, n_mis), true_p, cfg.p0).value;
    out[static_cast<std::size_t>(i)] = (lod_ob + lod_mis) / lod_ob;
  }
  return out;
}

Moments exact_conditional_moments(const StudyConfig& cfg, double true_p,
                                  double eps_lod) {
  require_probability(true_p, "true_p");
  const std::int64_t n_mis = cfg.missing();
  if (n_mis > 100000) {
    throw SizeError("missing block of " + std::to_string(n_mis) +
                    " exceeds the enumeration bound of 100000");
  }

  const auto p = static_cast<long double>(true_p);
  const auto p0 = static_cast<long double>(cfg.p0);
  const long double term_success = std::log(p) - std::log(p0);
  const long double term_failure = std::log1p(-p) - std::log1p(-p0);
  const long double lod_ob =
      static_cast<long double>(cfg.x0) * term_success +
      static_cast<long double>(cfg.n0 - cfg.x0) * term_failure;
  if (std::abs(static_cast<double>(lod_ob)) < eps_lod) {
    throw InstabilityError("observed lod is below the stability threshold");
  }
  if (n_mis == 0) return Moments{1.0, 0.0};

  const long double n = static_cast<long double>(n_mis);
  const long double log_n_fact = std::lgamma(n + 1.0L);
  const long double log_p = std::log(p);
  const long double log_q = std::log1p(-p);

  auto mass = [&](std::int64_t k) {
    const auto kk = static_cast<long double>(k);
    return std::exp(log_n_fact - std::lgamma(kk + 1.0L) -
                    std::lgamma(n - kk + 1.0L) + kk * log_p +
                    (n - kk) * log_q);
  };
  auto value = [&](std::int64_t k) {
    const long double lod_mis = static_cast<long double>(k) * term_success +
                                static_cast<long double>(n_mis - k) *
                                    term_failure;
    return (lod_ob + lod_mis) / lod_ob;
  };

  long double total = 0.0L;
  long double mean_acc = 0.0L;
  for (std::int64_t k = 0; k <= n_mis; ++k) {
    const long double m = mass(k);
    total += m;
    mean_acc += m * value(k);
  }
  const long double mean = mean_acc / total;

  long double var_acc = 0.0L;
  for (std::int64_t k = 0; k <= n_mis; ++k) {
    const long double d = value(k) - mean;
    var_acc += mass(k) * d * d;
  }
  return Moments{static_cast<double>(mean),
                 static_cast<double>(var_acc / total)};
}

DensityGrid contour_grid(const JointSample& sample, int bins_x, int bins_y) {
  if (bins_x < 2 || bins_y < 2) {
    throw DomainError("need at least 2 bins per axis");
  }
  if (sample.pairs.empty()) {
    throw DomainError("cannot grid an empty sample");
  }

  double x_min = sample.pairs.front().lod_ob, x_max = x_min;
  double y_min = sample.pairs.front().lod_co, y_max = y_min;
  for (const auto& pair : sample.pairs) {
    x_min = std::min(x_min, pair.lod_ob);
    x_max = std::max(x_max, pair.lod_ob);
    y_min = std::min(y_min, pair.lod_co);
    y_max = std::max(y_max, pair.lod_co);
  }
  auto pad = [](double lo, double hi) {
    const double range = hi - lo;
    return range > 0.0 ? 0.01 * range : std::max(0.5, 0.01 * std::abs(hi));
  };
  const double x_pad = pad(x_min, x_max), y_pad = pad(y_min, y_max);
  const double x_lo = x_min - x_pad, x_hi = x_max + x_pad;
  const double y_lo = y_min - y_pad, y_hi = y_max + y_pad;

  DensityGrid grid;
  grid.x_edges.resize(static_cast<std::size_t>(bins_x) + 1);
  grid.y_edges.resize(static_cast<std::size_t>(bins_y) + 1);
  for (int i = 0; i <= bins_x; ++i) {
    grid.x_edges[static_cast<std::size_t>(i)] =
        x_lo + (x_hi - x_lo) * static_cast<double>(i) / bins_x;
  }
  for (int j = 0; j <= bins_y; ++j) {
    grid.y_edges[static_cast<std::size_t>(j)] =
        y_lo + (y_hi - y_lo) * static_cast<double>(j) / bins_y;
  }

  grid.counts.assign(static_cast<std::size_t>(bins_x),
                     std::vector<std::int64_t>(
                         static_cast<std::size_t>(bins_y), 0));
  const double x_width = (x_hi - x_lo) / bins_x;
  const double y_width = (y_hi - y_lo) / bins_y;
  for (const auto& pair : sample.pairs) {
    auto ix = static_cast<std::int64_t>((pair.lod_ob - x_lo) / x_width);
    auto iy = static_cast<std::int64_t>((pair.lod_co - y_lo) / y_width);
    ix = std::clamp<std::int64_t>(ix, 0, bins_x - 1);
    iy = std::clamp<std::int64_t>(iy, 0, bins_y - 1);
    ++grid.counts[static_cast<std::size_t>(ix)][static_cast<std::size_t>(iy)];
  }

  const auto replicates = static_cast<double>(sample.pairs.size());
  grid.normalized.assign(static_cast<std::size_t>(bins_x),
                         std::vector<double>(static_cast<std::size_t>(bins_y),
                                             0.0));
  for (int i = 0; i < bins_x; ++i) {
    for (int j = 0; j < bins_y; ++j) {
      grid.normalized[static_cast<std::size_t>(i)]
                     [static_cast<std::size_t>(j)] =
          static_cast<double>(grid.counts[static_cast<std::size_t>(i)]
                                         [static_cast<std::size_t>(j)]) /
          replicates;
    }
  }
  return grid;
}

std::vector<RatioLine> reference_lines(
    const DensityGrid& grid, const std::vector<double>& extra_ratios) {
  std::vector<double> ratios{1.0, 1.25};
  ratios.insert(ratios.end(), extra_ratios.begin(), extra_ratios.end());
  std::sort(ratios.begin(), ratios.end());
  ratios.erase(std::unique(ratios.begin(), ratios.end()), ratios.end());

  const double x_lo = grid.x_edges.front(), x_hi = grid.x_edges.back();
  const double y_lo = grid.y_edges.front(), y_hi = grid.y_edges.back();

  std::vector<RatioLine> lines;
  for (double r : ratios) {
    if (!(r > 0.0)) {
      throw DomainError("reference ratios must be positive, got " +
                        std::to_string(r));
    }
    const double x_begin = std::max(x_lo, y_lo / r);
    const double x_end = std::min(x_hi, y_hi / r);
    if (x_begin > x_end) continue;  // line misses the box
    lines.push_back(RatioLine{r, x_begin, r * x_begin, x_end, r * x_end});
  }
  return lines;
}

SdCurve sd_curve(std::int64_t n, std::int64_t n0, double p0,
                 const std::vector<double>& true_ps, double eps_lod) {
  if (n0 < 1 || n0 > n) {
    throw DomainError("need 0 < n0 <= n");
  }
  require_probability(p0, "p0");
  for (double p : true_ps) require_probability(p, "true_p");

  SdCurve curve{n, n0, p0, {}, true_ps, {}};
  curve.rows.reserve(static_cast<std::size_t>(n0) + 1);
  for (std::int64_t x0 = 0; x0 <= n0; ++x0) {
    SdCurveRow row{x0, false, 0.0};
    if (x0 > 0 && x0 < n0) {
      const StudyConfig cfg(n, n0, x0, p0);
      const double p_hat = cfg.mle_observed();
      const double lod_ob = lod_fixed(cfg.observed(), p_hat, p0).value;
      if (std::abs(lod_ob) >= eps_lod) {
        row.stable = true;
        row.sd_inverse_ri =
            std::sqrt(variance_inverse_ri(cfg, p_hat, n - n0, eps_lod));
      }
    }
    curve.rows.push_back(row);
  }

  curve.density_curves.reserve(true_ps.size());
  for (double p : true_ps) {
    std::vector<double> masses(static_cast<std::size_t>(n0) + 1);
    for (std::int64_t x0 = 0; x0 <= n0; ++x0) {
      masses[static_cast<std::size_t>(x0)] = binomial_pmf(n0, x0, p);
    }
    curve.density_curves.push_back(std::move(masses));
  }
  return curve;
}

}  // namespace relinfo
