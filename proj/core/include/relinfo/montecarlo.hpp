#pragma once

#include <cstdint>
#include <vector>

#include "relinfo/binomial.hpp"
#include "relinfo/relative_information.hpp"

namespace relinfo {

// Pairs with observed lod below this are excluded from ratio statistics by
// default; the empirical ratio diverges as the observed lod approaches zero.
inline constexpr double kRatioFloor = 1e-3;

struct SimConfig {
  SimConfig(std::int64_t n, std::int64_t n0, double true_p, double p0,
            std::int64_t replicates, std::uint64_t seed);

  std::int64_t n;
  std::int64_t n0;
  double true_p;
  double p0;
  std::int64_t replicates;
  std::uint64_t seed;
};

struct LodPair {
  double lod_ob;
  double lod_co;
};

// Joint draws of the observed-data and complete-data likelihood-ratio
// statistics (MLE vs null form, natural log).
struct JointSample {
  SimConfig config;
  std::vector<LodPair> pairs;
};

// Equal-width 2-D histogram of a joint sample.
struct DensityGrid {
  std::vector<double> x_edges;  // size bins_x + 1, strictly increasing
  std::vector<double> y_edges;  // size bins_y + 1
  std::vector<std::vector<std::int64_t>> counts;  // counts[ix][iy]
  std::vector<std::vector<double>> normalized;    // counts / replicates

  int bins_x() const { return static_cast<int>(x_edges.size()) - 1; }
  int bins_y() const { return static_cast<int>(y_edges.size()) - 1; }
};

// Segment of the line y = r*x clipped to a grid's bounding box.
struct RatioLine {
  double r;
  double x_begin;
  double y_begin;
  double x_end;
  double y_end;
};

struct RatioStats {
  double mean = 0.0;
  double sd = 0.0;
  double max = 0.0;
  double q50 = 0.0;
  double q90 = 0.0;
  double q99 = 0.0;
  std::int64_t included = 0;
  std::int64_t excluded = 0;
};

struct Moments {
  double mean;
  double variance;
};

struct SdCurveRow {
  std::int64_t x0;
  bool stable;
  double sd_inverse_ri;  // meaningful only when stable
};

struct SdCurve {
  std::int64_t n;
  std::int64_t n0;
  double p0;
  std::vector<SdCurveRow> rows;                    // x0 = 0..n0
  std::vector<double> true_ps;
  std::vector<std::vector<double>> density_curves;  // [which p][x0] mass
};

// Draws (observed, complete) lod pairs: per replicate, X_ob ~ B(n0, true_p)
// and X_mis ~ B(n-n0, true_p) from the replicate's own counter stream, so
// the result is bit-identical for a given seed at any thread count.
JointSample simulate_joint_lod(const SimConfig& cfg, int threads = 1);

// Mean/sd/max/quantiles of lod_co/lod_ob over pairs with lod_ob >= floor.
RatioStats empirical_ratio_stats(const JointSample& sample,
                                 double ratio_floor = kRatioFloor);

// Samples the inverse relative information (lod_ob + lod_mis)/lod_ob given
// the observed data, with fixed-parameter lods at (true_p, p0).
std::vector<double> conditional_simulate(const StudyConfig& cfg, double true_p,
                                         std::int64_t replicates,
                                         std::uint64_t seed,
                                         double eps_lod = kEpsLod);

// Exact mean and variance of the inverse relative information by full
// enumeration of the missing block. Independent of the closed forms in
// relative_information.hpp; extended precision throughout.
Moments exact_conditional_moments(const StudyConfig& cfg, double true_p,
                                  double eps_lod = kEpsLod);

// 2-D histogram over the sample's bounding box, expanded 1% per side.
DensityGrid contour_grid(const JointSample& sample, int bins_x, int bins_y);

// Reference lines y = r*x for r in {1, 1.25} plus extra_ratios, clipped to
// the grid box. Lines that miss the box are omitted.
std::vector<RatioLine> reference_lines(const DensityGrid& grid,
                                       const std::vector<double>& extra_ratios);

// Plug-in sd of the inverse relative information against the observed
// success count, with exact Binomial(n0, p) mass curves for each true p.
// Rows whose observed lod vanishes (x0/n0 = p0) or whose MLE is on the
// boundary are flagged unstable instead of carrying a value.
SdCurve sd_curve(std::int64_t n, std::int64_t n0, double p0,
                 const std::vector<double>& true_ps, double eps_lod = kEpsLod);

}  // namespace relinfo
