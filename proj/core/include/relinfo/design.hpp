#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "relinfo/relative_information.hpp"

namespace relinfo {

// One variable of a follow-up design: its study data plus the cost of
// resolving each missing value and the one-time charge for touching the
// variable at all.
struct VariableRecord {
  VariableRecord(std::string id, StudyConfig cfg, double unit_cost = 1.0,
                 double setup_cost = 0.0, std::int64_t max_resolvable = -1);

  std::string id;
  StudyConfig cfg;
  double unit_cost;
  double setup_cost;
  std::int64_t max_resolvable;  // defaults to n - n0
};

enum class SolveMode { exact, greedy };

struct DesignProblem {
  std::vector<VariableRecord> variables;
  double budget = 0.0;
  SolveMode mode = SolveMode::exact;

  void validate() const;
};

using Allocation = std::map<std::string, std::int64_t>;

struct DesignSolution {
  Allocation allocations;  // every variable id, zero when untouched
  double objective = 1.0;  // overall inverse relative information
  double budget_used = 0.0;
  bool optimal = false;
  std::vector<std::string> dropped_unstable;  // excluded from the objective
  std::vector<std::string> warnings;
};

// Overall inverse relative information: the lod-weighted mean of the
// per-variable plug-in inverse RI at the given allocations,
//   sum_i lod_ob_i * (1 + n1_i/n0_i) / sum_i lod_ob_i.
// Throws InstabilityError (with ids) if any variable's observed lod is
// below eps_lod, EmptyWeightError if the weights sum to ~zero.
double combine_overall_inverse_ri(const std::vector<VariableRecord>& variables,
                                  const Allocation& allocations,
                                  double eps_lod = kEpsLod);

// The weighted-mean core on raw values; exposed for property checks of the
// combination itself (scale invariance, single-variable reduction).
double combine_weighted_inverse_ri(std::span<const double> lods,
                                   std::span<const double> inverse_ris,
                                   double eps_lod = kEpsLod);

// Maximizes the overall inverse RI subject to
//   sum_i (unit_cost_i * n1_i + setup_cost_i * [n1_i > 0]) <= budget.
// Exact mode solves the fixed-charge problem by enumerating the sets of
// variables that pay their setup charge and running a branch-and-bound
// bounded knapsack inside each; when too many variables carry setup
// charges, it falls back to an amortized greedy and reports optimal=false.
// Variables with unstable lods are excluded with a warning.
DesignSolution optimize_allocation(const DesignProblem& problem,
                                   double eps_lod = kEpsLod);

// Testing oracle: exhaustive enumeration of every feasible integer
// allocation. Ties resolve to the lexicographically smallest allocation
// vector in id order. Throws SizeError when the space exceeds 10^6 points.
DesignSolution brute_force_allocation(const DesignProblem& problem,
                                      double eps_lod = kEpsLod);

enum class FollowUpChoice { resolve_missing, new_individuals, equivalent };

// Both follow-up options on a common scale: the expected factor by which
// the complete-data lod exceeds the observed one.
struct ComparisonReport {
  double resolve_factor;          // 1 + n1_resolve/n0
  double new_individuals_factor;  // (n + n_new)/n
  FollowUpChoice better;
  double break_even_n_new;  // n_new with the same factor as resolving
};

ComparisonReport compare_markers_vs_individuals(const VariableRecord& record,
                                                std::int64_t n1_resolve,
                                                std::int64_t n_new,
                                                double eps_lod = kEpsLod);

}  // namespace relinfo
