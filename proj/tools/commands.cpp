#include "commands.hpp"

#include <algorithm>
#include <cmath>

#include "relinfo/errors.hpp"

namespace relinfo::cli {

double lod_display_scale(LogBase base) {
  return base == LogBase::ten ? 1.0 / kLn10 : 1.0;
}

const char* log_base_name(LogBase base) {
  return base == LogBase::ten ? "10" : "e";
}

EstimateReport run_estimate(const std::vector<VariableRecord>& records,
                            std::optional<std::int64_t> n1,
                            const GlobalOptions& options) {
  const double scale = lod_display_scale(options.log_base);
  EstimateReport report;
  report.rows.reserve(records.size());
  for (const auto& record : records) {
    EstimateRow row;
    row.id = record.id;
    const std::int64_t n1_row = n1.value_or(record.cfg.missing());
    try {
      const RelInfoSummary summary =
          plugin_summary(record.cfg, n1_row, {false, options.eps_lod});
      row.ok = true;
      row.stable = summary.stable;
      row.lod_ob = summary.lod_ob.value * scale;
      row.plugin_ri1 = summary.plugin_ri1;
      row.expected_inverse_ri = summary.expected_inverse_ri;
      row.sd_inverse_ri = summary.sd_inverse_ri;
      row.equivalent_individuals =
          equivalent_additional_individuals(summary.plugin_ri1,
                                            record.cfg.n);
    } catch (const Error& e) {
      row.ok = false;
      row.stable = false;
      row.note = e.what();
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string estimate_to_csv(const EstimateReport& report) {
  std::string out =
      "id,lod_ob,plugin_ri1,expected_inverse_ri,sd_inverse_ri,"
      "equivalent_additional_individuals,stable,note\n";
  for (const auto& row : report.rows) {
    out += row.id;
    out += ',';
    if (row.ok) {
      out += format_double(row.lod_ob);
      out += ',';
      out += format_double(row.plugin_ri1);
      out += ',';
      out += format_double(row.expected_inverse_ri);
      out += ',';
      out += format_double(row.sd_inverse_ri);
      out += ',';
      out += format_double(row.equivalent_individuals);
      out += ',';
      out += row.stable ? "true" : "false";
    } else {
      out += ",,,,,false";
    }
    out += ',';
    out += row.note;
    out += '\n';
  }
  return out;
}

nlohmann::json estimate_to_json(const EstimateReport& report,
                                const GlobalOptions& options) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json j{{"id", row.id}, {"stable", row.stable}};
    if (row.ok) {
      j["lod_ob"] = row.lod_ob;
      j["plugin_ri1"] = row.plugin_ri1;
      j["expected_inverse_ri"] = row.expected_inverse_ri;
      j["sd_inverse_ri"] = row.sd_inverse_ri;
      j["equivalent_additional_individuals"] = row.equivalent_individuals;
    }
    if (!row.note.empty()) j["note"] = row.note;
    rows.push_back(std::move(j));
  }
  return nlohmann::json{{"schema", kSchema},
                        {"command", "estimate"},
                        {"log_base", log_base_name(options.log_base)},
                        {"rows", std::move(rows)}};
}

DesignReport run_design(const std::vector<VariableRecord>& records,
                        double budget, SolveMode mode, bool oracle,
                        const GlobalOptions& options) {
  DesignProblem problem{records, budget, mode};
  DesignReport report;
  report.mode = mode;
  report.budget = budget;
  report.oracle = oracle;
  report.solution = oracle
                        ? brute_force_allocation(problem, options.eps_lod)
                        : optimize_allocation(problem, options.eps_lod);

  for (const auto& record : records) {
    DesignVariableRow row;
    row.id = record.id;
    row.n1 = report.solution.allocations.at(record.id);
    if (row.n1 > 0) {
      row.cost = record.setup_cost +
                 record.unit_cost * static_cast<double>(row.n1);
    }
    row.dropped =
        std::find(report.solution.dropped_unstable.begin(),
                  report.solution.dropped_unstable.end(),
                  record.id) != report.solution.dropped_unstable.end();
    if (!row.dropped) {
      try {
        row.sd_inverse_ri = std::sqrt(variance_inverse_ri(
            record.cfg, record.cfg.mle_observed(), row.n1, options.eps_lod));
      } catch (const Error&) {
        // boundary MLE or vanishing lod: no spread estimate for this row
      }
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

nlohmann::json design_to_json(const DesignReport& report,
                              const GlobalOptions& options) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json j{{"id", row.id},
                     {"n1", row.n1},
                     {"cost", row.cost},
                     {"dropped_unstable", row.dropped}};
    j["sd_inverse_ri"] = row.sd_inverse_ri
                             ? nlohmann::json(*row.sd_inverse_ri)
                             : nlohmann::json(nullptr);
    rows.push_back(std::move(j));
  }
  return nlohmann::json{
      {"schema", kSchema},
      {"command", "design"},
      {"log_base", log_base_name(options.log_base)},
      {"mode", report.mode == SolveMode::exact ? "exact" : "greedy"},
      {"solver", report.oracle ? "brute_force" : "optimizer"},
      {"budget", report.budget},
      {"budget_used", report.solution.budget_used},
      {"objective", report.solution.objective},
      {"optimal", report.solution.optimal},
      {"allocations", std::move(rows)},
      {"dropped_unstable", report.solution.dropped_unstable},
      {"warnings", report.solution.warnings}};
}

SimulateOutput run_simulate(const SimulateRequest& request,
                            const GlobalOptions& options) {
  const double scale = lod_display_scale(options.log_base);
  const JointSample sample =
      simulate_joint_lod(request.config, request.threads);
  const DensityGrid grid =
      contour_grid(sample, request.bins, request.bins);
  const std::vector<RatioLine> lines =
      reference_lines(grid, request.extra_ratio_lines);

  SimulateOutput out;

  out.contour_csv = "x_bin_center,y_bin_center,count,density\n";
  for (int i = 0; i < grid.bins_x(); ++i) {
    const double xc = 0.5 * (grid.x_edges[static_cast<std::size_t>(i)] +
                             grid.x_edges[static_cast<std::size_t>(i) + 1]);
    for (int j = 0; j < grid.bins_y(); ++j) {
      const double yc = 0.5 * (grid.y_edges[static_cast<std::size_t>(j)] +
                               grid.y_edges[static_cast<std::size_t>(j) + 1]);
      out.contour_csv += format_double(xc * scale);
      out.contour_csv += ',';
      out.contour_csv += format_double(yc * scale);
      out.contour_csv += ',';
      out.contour_csv += std::to_string(
          grid.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      out.contour_csv += ',';
      out.contour_csv += format_double(
          grid.normalized[static_cast<std::size_t>(i)]
                         [static_cast<std::size_t>(j)]);
      out.contour_csv += '\n';
    }
  }

  out.reference_lines_csv = "r,x_begin,y_begin,x_end,y_end\n";
  for (const auto& line : lines) {
    out.reference_lines_csv += format_double(line.r);
    out.reference_lines_csv += ',';
    out.reference_lines_csv += format_double(line.x_begin * scale);
    out.reference_lines_csv += ',';
    out.reference_lines_csv += format_double(line.y_begin * scale);
    out.reference_lines_csv += ',';
    out.reference_lines_csv += format_double(line.x_end * scale);
    out.reference_lines_csv += ',';
    out.reference_lines_csv += format_double(line.y_end * scale);
    out.reference_lines_csv += '\n';
  }

  const RatioStats stats = empirical_ratio_stats(sample, request.ratio_floor);
  out.ratio_stats = nlohmann::json{
      {"schema", kSchema},
      {"command", "simulate"},
      {"log_base", log_base_name(options.log_base)},
      {"n", request.config.n},
      {"n0", request.config.n0},
      {"true_p", request.config.true_p},
      {"p0", request.config.p0},
      {"replicates", request.config.replicates},
      {"seed", request.config.seed},
      {"ratio_floor", request.ratio_floor},
      {"ratio_stats",
       {{"mean", stats.mean},
        {"sd", stats.sd},
        {"max", stats.max},
        {"q50", stats.q50},
        {"q90", stats.q90},
        {"q99", stats.q99},
        {"included", stats.included},
        {"excluded", stats.excluded}}}};
  return out;
}

std::string run_curves_csv(std::int64_t n, std::int64_t n0, double p0,
                           const std::vector<double>& true_ps,
                           const GlobalOptions& options) {
  const SdCurve curve = sd_curve(n, n0, p0, true_ps, options.eps_lod);
  std::string out = "x0,sd_inverse_ri";
  for (double p : true_ps) {
    out += ",density_p";
    out += format_double(p);
  }
  out += '\n';
  for (std::size_t r = 0; r < curve.rows.size(); ++r) {
    const auto& row = curve.rows[r];
    out += std::to_string(row.x0);
    out += ',';
    if (row.stable) out += format_double(row.sd_inverse_ri);
    for (std::size_t k = 0; k < curve.density_curves.size(); ++k) {
      out += ',';
      out += format_double(curve.density_curves[k][r]);
    }
    out += '\n';
  }
  return out;
}

nlohmann::json error_json(const std::string& type,
                          const std::string& message) {
  return nlohmann::json{{"schema", kSchema},
                        {"error", {{"type", type}, {"message", message}}}};
}

nlohmann::json error_json(const std::vector<RowError>& errors) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& e : errors) {
    rows.push_back({{"line", e.line}, {"message", e.message}});
  }
  return nlohmann::json{
      {"schema", kSchema},
      {"error",
       {{"type", "ParseError"},
        {"message", "study table has invalid rows"},
        {"rows", std::move(rows)}}}};
}

}  // namespace relinfo::cli
