#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "relinfo/design.hpp"
#include "relinfo/montecarlo.hpp"
#include "study_table.hpp"

namespace relinfo::cli {

inline constexpr const char* kSchema = "relinfo/1";

struct GlobalOptions {
  LogBase log_base = LogBase::natural;
  double eps_lod = kEpsLod;
};

// Scaling applied to displayed lod values; everything else is base-free.
double lod_display_scale(LogBase base);
const char* log_base_name(LogBase base);

struct EstimateRow {
  std::string id;
  bool ok = false;        // values below are meaningful
  bool stable = true;     // false when the row was flagged, not failed
  std::string note;       // why the row is flagged/unusable
  double lod_ob = 0.0;    // in the display base
  double plugin_ri1 = 1.0;
  double expected_inverse_ri = 1.0;
  double sd_inverse_ri = 0.0;
  double equivalent_individuals = 0.0;
};

struct EstimateReport {
  std::vector<EstimateRow> rows;
};

// Per-variable plug-in summary; n1 empty means full resolution (n - n0).
// Rows with boundary MLEs, vanishing lods, or out-of-range n1 are flagged
// rather than failing the run.
EstimateReport run_estimate(const std::vector<VariableRecord>& records,
                            std::optional<std::int64_t> n1,
                            const GlobalOptions& options);
std::string estimate_to_csv(const EstimateReport& report);
nlohmann::json estimate_to_json(const EstimateReport& report,
                                const GlobalOptions& options);

struct DesignVariableRow {
  std::string id;
  std::int64_t n1 = 0;
  double cost = 0.0;
  bool dropped = false;
  std::optional<double> sd_inverse_ri;  // absent when undefined
};

struct DesignReport {
  DesignSolution solution;
  std::vector<DesignVariableRow> rows;
  SolveMode mode = SolveMode::exact;
  double budget = 0.0;
  bool oracle = false;
};

DesignReport run_design(const std::vector<VariableRecord>& records,
                        double budget, SolveMode mode, bool oracle,
                        const GlobalOptions& options);
nlohmann::json design_to_json(const DesignReport& report,
                              const GlobalOptions& options);

struct SimulateRequest {
  SimConfig config;
  int bins = 50;
  std::vector<double> extra_ratio_lines;
  double ratio_floor = kRatioFloor;
  int threads = 1;
};

struct SimulateOutput {
  std::string contour_csv;
  std::string reference_lines_csv;
  nlohmann::json ratio_stats;
};

SimulateOutput run_simulate(const SimulateRequest& request,
                            const GlobalOptions& options);

std::string run_curves_csv(std::int64_t n, std::int64_t n0, double p0,
                           const std::vector<double>& true_ps,
                           const GlobalOptions& options);

nlohmann::json error_json(const std::string& type, const std::string& message);
nlohmann::json error_json(const std::vector<RowError>& errors);

}  // namespace relinfo::cli
