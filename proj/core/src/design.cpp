#include "relinfo/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "relinfo/errors.hpp"

namespace relinfo {

namespace {

// Feasibility slop for floating-point costs; solutions may exceed the
// budget by at most this much.
constexpr double kBudgetSlack = 1e-9;

// Largest number of setup-charged variables for which exact active-subset
// enumeration (2^s solves) is attempted.
constexpr int kExactSubsetLimit = 20;

// Branch-and-bound prune margin, relative to the incumbent: branches whose
// bound is within this of the incumbent count as ties and are discarded.
constexpr double kPruneMargin = 1e-13;

struct Item {
  std::size_t var;  // index into problem.variables
  double gain;      // objective gain per resolved value
  double unit_cost;
  double setup_cost;
  std::int64_t cap;
};

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ", ";
    out += id;
  }
  return out;
}

// Units of an item purchasable with `remaining` budget, absorbing float
// noise at the boundary.
std::int64_t affordable_units(double remaining, double unit_cost) {
  if (unit_cost <= 0.0) return std::numeric_limits<std::int64_t>::max();
  if (remaining <= 0.0) return 0;
  const double q = remaining / unit_cost;
  if (q >= static_cast<double>(std::numeric_limits<std::int64_t>::max())) {
    return std::numeric_limits<std::int64_t>::max();
  }
  auto k = static_cast<std::int64_t>(q);
  if ((static_cast<double>(k) + 1.0) * unit_cost <= remaining + kBudgetSlack) {
    ++k;
  }
  return k;
}

// Exact bounded knapsack: integer units per item, fractional completion
// bound, depth-first with the greedy fill explored first. Items must be
// sorted by gain/unit_cost descending.
class KnapsackSearch {
 public:
  KnapsackSearch(const std::vector<Item>& items, double budget)
      : items_(items), current_(items.size(), 0), best_alloc_(items.size(), 0) {
    dfs(0, budget, 0.0);
  }

  double best_value() const { return best_value_; }
  const std::vector<std::int64_t>& best_alloc() const { return best_alloc_; }

 private:
  void dfs(std::size_t i, double remaining, double acc) {
    if (acc > best_value_) {
      best_value_ = acc;
      best_alloc_ = current_;
    }
    if (i == items_.size()) return;
    const double bound = acc + fractional_bound(i, remaining);
    if (bound <= best_value_ + kPruneMargin * std::max(1.0, best_value_)) {
      return;
    }
    const Item& item = items_[i];
    std::int64_t k_max =
        std::min(item.cap, affordable_units(remaining, item.unit_cost));
    if (k_max < 0) k_max = 0;
    // a free item with positive gain is always taken in full
    const std::int64_t k_min = item.unit_cost <= 0.0 ? k_max : 0;
    for (std::int64_t k = k_max; k >= k_min; --k) {
      current_[i] = k;
      dfs(i + 1, remaining - static_cast<double>(k) * item.unit_cost,
          acc + static_cast<double>(k) * item.gain);
    }
    current_[i] = 0;
  }

  double fractional_bound(std::size_t from, double remaining) const {
    if (remaining < 0.0) remaining = 0.0;
    double bound = 0.0;
    for (std::size_t j = from; j < items_.size(); ++j) {
      const Item& item = items_[j];
      const double full_cost =
          item.unit_cost * static_cast<double>(item.cap);
      if (full_cost <= remaining) {
        bound += item.gain * static_cast<double>(item.cap);
        remaining -= full_cost;
      } else {
        bound += item.gain * (remaining / item.unit_cost);
        break;
      }
    }
    return bound;
  }

  const std::vector<Item>& items_;
  std::vector<std::int64_t> current_;
  std::vector<std::int64_t> best_alloc_;
  double best_value_ = 0.0;
};

void sort_by_unit_ratio(std::vector<Item>& items,
                        const std::vector<VariableRecord>& vars) {
  std::sort(items.begin(), items.end(), [&](const Item& a, const Item& b) {
    const double ra = a.gain / a.unit_cost;
    const double rb = b.gain / b.unit_cost;
    if (ra != rb) return ra > rb;
    return vars[a.var].id < vars[b.var].id;
  });
}

// Exact solve: enumerate which setup-charged variables pay their charge
// (buying their first unit up front), then fill the rest by exact knapsack.
void solve_exact(const std::vector<Item>& items,
                 const std::vector<VariableRecord>& vars, double budget,
                 std::vector<std::int64_t>& alloc_by_var) {
  std::vector<Item> setup_items;
  std::vector<Item> open_items;  // no setup charge, usable in every subset
  for (const Item& item : items) {
    (item.setup_cost > 0.0 ? setup_items : open_items).push_back(item);
  }
  sort_by_unit_ratio(open_items, vars);

  double best_value = -1.0;
  std::vector<Item> inner;
  for (std::uint64_t mask = 0; mask < (1ull << setup_items.size()); ++mask) {
    double pre_cost = 0.0;
    double pre_value = 0.0;
    for (std::size_t s = 0; s < setup_items.size(); ++s) {
      if (mask & (1ull << s)) {
        pre_cost += setup_items[s].setup_cost + setup_items[s].unit_cost;
        pre_value += setup_items[s].gain;
      }
    }
    if (pre_cost > budget + kBudgetSlack) continue;

    inner = open_items;
    for (std::size_t s = 0; s < setup_items.size(); ++s) {
      if ((mask & (1ull << s)) && setup_items[s].cap > 1) {
        Item rest = setup_items[s];
        rest.cap -= 1;
        inner.push_back(rest);
      }
    }
    // Active variables have their setup paid; only unit costs remain.
    sort_by_unit_ratio(inner, vars);
    const KnapsackSearch search(inner, budget - pre_cost);

    if (pre_value + search.best_value() > best_value) {
      best_value = pre_value + search.best_value();
      std::fill(alloc_by_var.begin(), alloc_by_var.end(), 0);
      for (std::size_t s = 0; s < setup_items.size(); ++s) {
        if (mask & (1ull << s)) alloc_by_var[setup_items[s].var] += 1;
      }
      for (std::size_t j = 0; j < inner.size(); ++j) {
        alloc_by_var[inner[j].var] += search.best_alloc()[j];
      }
    }
  }
}

// Amortized greedy: rank variables by total value over total cost of a
// full fill, take them in order, partially filling the first that no
// longer fits completely.
void solve_greedy(std::vector<Item> items,
                  const std::vector<VariableRecord>& vars, double budget,
                  std::vector<std::int64_t>& alloc_by_var) {
  std::sort(items.begin(), items.end(), [&](const Item& a, const Item& b) {
    const double ra = a.gain * static_cast<double>(a.cap) /
                      (a.setup_cost + a.unit_cost * static_cast<double>(a.cap));
    const double rb = b.gain * static_cast<double>(b.cap) /
                      (b.setup_cost + b.unit_cost * static_cast<double>(b.cap));
    if (ra != rb) return ra > rb;
    return vars[a.var].id < vars[b.var].id;
  });

  double remaining = budget;
  for (const Item& item : items) {
    if (item.setup_cost + item.unit_cost > remaining + kBudgetSlack) {
      continue;  // cannot even activate with one unit
    }
    std::int64_t k = item.cap;
    if (item.unit_cost > 0.0) {
      k = std::min(k, affordable_units(remaining - item.setup_cost,
                                       item.unit_cost));
    }
    if (k < 1) continue;
    alloc_by_var[item.var] = k;
    remaining -= item.setup_cost +
                 item.unit_cost * static_cast<double>(k);
  }
}

double allocation_cost(const std::vector<VariableRecord>& vars,
                       const Allocation& allocations) {
  double cost = 0.0;
  for (const auto& var : vars) {
    const auto it = allocations.find(var.id);
    const std::int64_t k = it == allocations.end() ? 0 : it->second;
    if (k > 0) {
      cost += var.setup_cost + var.unit_cost * static_cast<double>(k);
    }
  }
  return cost;
}

// Shared preamble of both solvers: observed lods, stability split, and the
// per-unit objective gains over the stable variables.
struct WeightedInstance {
  std::vector<double> lod;           // per variable, MLE-vs-null
  std::vector<bool> stable;          // lod at or above eps_lod
  std::vector<std::size_t> stable_vars;
  std::vector<std::string> dropped;
  double weight_sum = 0.0;
};

WeightedInstance weigh_variables(const std::vector<VariableRecord>& vars,
                                 double eps_lod) {
  WeightedInstance inst;
  inst.lod.resize(vars.size());
  inst.stable.resize(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    inst.lod[i] =
        lod_mle_vs_null(vars[i].cfg.observed(), vars[i].cfg.p0).value;
    inst.stable[i] = std::abs(inst.lod[i]) >= eps_lod;
    if (inst.stable[i]) {
      inst.stable_vars.push_back(i);
      inst.weight_sum += inst.lod[i];
    } else {
      inst.dropped.push_back(vars[i].id);
    }
  }
  if (inst.stable_vars.empty()) {
    throw EmptyWeightError(
        "no variable has an observed lod above the stability threshold");
  }
  return inst;
}

DesignSolution finish_solution(const DesignProblem& problem,
                               const WeightedInstance& inst,
                               const std::vector<std::int64_t>& alloc_by_var,
                               bool optimal, double eps_lod) {
  DesignSolution sol;
  sol.optimal = optimal;
  sol.dropped_unstable = inst.dropped;
  if (!inst.dropped.empty()) {
    sol.warnings.push_back(
        "excluded variables with unstable observed lods: " +
        join_ids(inst.dropped));
  }
  std::vector<VariableRecord> stable_records;
  for (std::size_t i = 0; i < problem.variables.size(); ++i) {
    sol.allocations[problem.variables[i].id] = alloc_by_var[i];
    if (inst.stable[i]) stable_records.push_back(problem.variables[i]);
  }
  sol.objective =
      combine_overall_inverse_ri(stable_records, sol.allocations, eps_lod);
  sol.budget_used = allocation_cost(problem.variables, sol.allocations);
  return sol;
}

}  // namespace

VariableRecord::VariableRecord(std::string id_in, StudyConfig cfg_in,
                               double unit_cost_in, double setup_cost_in,
                               std::int64_t max_resolvable_in)
    : id(std::move(id_in)),
      cfg(cfg_in),
      unit_cost(unit_cost_in),
      setup_cost(setup_cost_in),
      max_resolvable(max_resolvable_in < 0 ? cfg_in.missing()
                                           : max_resolvable_in) {
  if (!(unit_cost >= 0.0) || !std::isfinite(unit_cost)) {
    throw DomainError("unit_cost must be finite and >= 0");
  }
  if (!(setup_cost >= 0.0) || !std::isfinite(setup_cost)) {
    throw DomainError("setup_cost must be finite and >= 0");
  }
  if (max_resolvable > cfg.missing()) {
    throw DomainError("max_resolvable must not exceed n - n0 for variable " +
                      id);
  }
}

void DesignProblem::validate() const {
  if (variables.empty()) {
    throw DomainError("a design problem needs at least one variable");
  }
  std::set<std::string> ids;
  for (const auto& var : variables) {
    if (!ids.insert(var.id).second) {
      throw DomainError("duplicate variable id: " + var.id);
    }
  }
  if (!(budget >= 0.0) || !std::isfinite(budget)) {
    throw DomainError("budget must be finite and >= 0");
  }
}

double combine_weighted_inverse_ri(std::span<const double> lods,
                                   std::span<const double> inverse_ris,
                                   double eps_lod) {
  if (lods.empty() || lods.size() != inverse_ris.size()) {
    throw DomainError("lods and inverse RI values must pair up");
  }
  double weight_sum = 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < lods.size(); ++i) {
    weight_sum += lods[i];
    acc += lods[i] * inverse_ris[i];
  }
  if (weight_sum < eps_lod) {
    throw EmptyWeightError("lod weights sum to " + std::to_string(weight_sum) +
                           ", below the stability threshold");
  }
  return acc / weight_sum;
}

double combine_overall_inverse_ri(const std::vector<VariableRecord>& variables,
                                  const Allocation& allocations,
                                  double eps_lod) {
  if (variables.empty()) {
    throw DomainError("cannot combine zero variables");
  }
  std::vector<double> lods;
  std::vector<double> inverse_ris;
  std::vector<std::string> unstable;
  lods.reserve(variables.size());
  inverse_ris.reserve(variables.size());
  for (const auto& var : variables) {
    const auto it = allocations.find(var.id);
    const std::int64_t k = it == allocations.end() ? 0 : it->second;
    if (k < 0 || k > var.max_resolvable) {
      throw DomainError("allocation " + std::to_string(k) +
                        " out of bounds for variable " + var.id);
    }
    const double lod =
        lod_mle_vs_null(var.cfg.observed(), var.cfg.p0).value;
    if (std::abs(lod) < eps_lod) unstable.push_back(var.id);
    lods.push_back(lod);
    inverse_ris.push_back(1.0 + static_cast<double>(k) /
                                    static_cast<double>(var.cfg.n0));
  }
  if (!unstable.empty()) {
    throw InstabilityError(
        "variables with unstable observed lods: " + join_ids(unstable),
        unstable);
  }
  return combine_weighted_inverse_ri(lods, inverse_ris, eps_lod);
}

DesignSolution optimize_allocation(const DesignProblem& problem,
                                   double eps_lod) {
  problem.validate();
  const auto& vars = problem.variables;
  const WeightedInstance inst = weigh_variables(vars, eps_lod);

  std::vector<std::int64_t> alloc_by_var(vars.size(), 0);
  std::vector<Item> items;
  std::size_t setup_count = 0;
  for (std::size_t i : inst.stable_vars) {
    if (vars[i].max_resolvable <= 0) continue;
    const double gain = inst.lod[i] / (static_cast<double>(vars[i].cfg.n0) *
                                       inst.weight_sum);
    if (vars[i].unit_cost == 0.0 && vars[i].setup_cost == 0.0) {
      // Resolving here is free; no budget interaction at all.
      alloc_by_var[i] = vars[i].max_resolvable;
      continue;
    }
    items.push_back(Item{i, gain, vars[i].unit_cost, vars[i].setup_cost,
                         vars[i].max_resolvable});
    if (vars[i].setup_cost > 0.0) ++setup_count;
  }

  bool optimal = false;
  std::vector<std::string> extra_warnings;
  std::vector<std::int64_t> solver_alloc(vars.size(), 0);
  if (problem.mode == SolveMode::exact &&
      setup_count <= static_cast<std::size_t>(kExactSubsetLimit)) {
    solve_exact(items, vars, problem.budget, solver_alloc);
    optimal = true;
  } else {
    if (problem.mode == SolveMode::exact) {
      extra_warnings.push_back(
          "too many setup-charged variables for exact subset enumeration; "
          "fell back to greedy (optimal=false)");
    }
    solve_greedy(items, vars, problem.budget, solver_alloc);
  }
  // merge onto the free fills; the solvers only touch budgeted variables
  for (std::size_t i = 0; i < vars.size(); ++i) {
    alloc_by_var[i] += solver_alloc[i];
  }

  DesignSolution sol =
      finish_solution(problem, inst, alloc_by_var, optimal, eps_lod);
  sol.warnings.insert(sol.warnings.end(), extra_warnings.begin(),
                      extra_warnings.end());
  return sol;
}

DesignSolution brute_force_allocation(const DesignProblem& problem,
                                      double eps_lod) {
  problem.validate();
  const auto& vars = problem.variables;

  double space = 1.0;
  for (const auto& var : vars) {
    space *= static_cast<double>(var.max_resolvable + 1);
  }
  if (space > 1e6) {
    throw SizeError("allocation space of " + std::to_string(space) +
                    " points exceeds the brute-force bound of 1e6");
  }

  const WeightedInstance inst = weigh_variables(vars, eps_lod);

  // Enumerate in increasing lexicographic order of the allocation vector
  // sorted by id, so the first optimum found is the lexicographically
  // smallest one.
  std::vector<std::size_t> order(vars.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return vars[a].id < vars[b].id;
  });

  std::vector<std::int64_t> current(vars.size(), 0);  // in id order
  std::vector<std::int64_t> best(vars.size(), 0);
  double best_objective = -std::numeric_limits<double>::infinity();

  while (true) {
    double cost = 0.0;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      const std::int64_t k = current[pos];
      if (k > 0) {
        const auto& var = vars[order[pos]];
        cost += var.setup_cost + var.unit_cost * static_cast<double>(k);
      }
    }
    if (cost <= problem.budget + kBudgetSlack) {
      double weight_sum = 0.0;
      double acc = 0.0;
      for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const std::size_t i = order[pos];
        if (!inst.stable[i]) continue;
        weight_sum += inst.lod[i];
        acc += inst.lod[i] *
               (1.0 + static_cast<double>(current[pos]) /
                          static_cast<double>(vars[i].cfg.n0));
      }
      const double objective = acc / weight_sum;
      if (objective > best_objective) {
        best_objective = objective;
        best = current;
      }
    }

    // odometer step, last id fastest
    std::size_t pos = order.size();
    while (pos > 0) {
      --pos;
      if (current[pos] < vars[order[pos]].max_resolvable) {
        ++current[pos];
        std::fill(current.begin() + static_cast<std::ptrdiff_t>(pos) + 1,
                  current.end(), 0);
        break;
      }
      if (pos == 0) {
        std::vector<std::int64_t> alloc_by_var(vars.size(), 0);
        for (std::size_t q = 0; q < order.size(); ++q) {
          alloc_by_var[order[q]] = best[q];
        }
        return finish_solution(problem, inst, alloc_by_var, true, eps_lod);
      }
    }
  }
}

ComparisonReport compare_markers_vs_individuals(const VariableRecord& record,
                                                std::int64_t n1_resolve,
                                                std::int64_t n_new,
                                                double eps_lod) {
  const StudyConfig& cfg = record.cfg;
  if (n1_resolve < 0 || n1_resolve > cfg.missing()) {
    throw DomainError("n1_resolve must satisfy 0 <= n1 <= n - n0");
  }
  if (n_new < 0) {
    throw DomainError("n_new must be >= 0");
  }
  if (cfg.x0 == 0 || cfg.x0 == cfg.n0) {
    throw BoundaryMleError("observed MLE is on the boundary");
  }
  const double lod_ob =
      lod_fixed(cfg.observed(), cfg.mle_observed(), cfg.p0).value;
  if (std::abs(lod_ob) < eps_lod) {
    throw InstabilityError("observed MLE equals the null probability");
  }

  ComparisonReport report{};
  report.resolve_factor = 1.0 + static_cast<double>(n1_resolve) /
                                    static_cast<double>(cfg.n0);
  report.new_individuals_factor =
      static_cast<double>(cfg.n + n_new) / static_cast<double>(cfg.n);
  if (report.resolve_factor > report.new_individuals_factor) {
    report.better = FollowUpChoice::resolve_missing;
  } else if (report.resolve_factor < report.new_individuals_factor) {
    report.better = FollowUpChoice::new_individuals;
  } else {
    report.better = FollowUpChoice::equivalent;
  }
  report.break_even_n_new =
      static_cast<double>(cfg.n) * (report.resolve_factor - 1.0);
  return report;
}

}  // namespace relinfo
