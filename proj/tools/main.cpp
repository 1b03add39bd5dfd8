#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "relinfo/errors.hpp"
#include "study_table.hpp"

namespace {

using namespace relinfo;
using namespace relinfo::cli;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  out << content;
}

const char* error_type(const Error& e) {
  if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
  if (dynamic_cast<const InstabilityError*>(&e)) return "InstabilityError";
  if (dynamic_cast<const BoundaryMleError*>(&e)) return "BoundaryMleError";
  if (dynamic_cast<const EmptyWeightError*>(&e)) return "EmptyWeightError";
  if (dynamic_cast<const SizeError*>(&e)) return "SizeError";
  if (dynamic_cast<const AllExcludedError*>(&e)) return "AllExcludedError";
  return "Error";
}

std::vector<VariableRecord> load_table(const std::string& path,
                                       double default_p0) {
  const ParseResult parsed =
      parse_study_table(read_file(path), TableOptions{default_p0});
  if (!parsed.ok()) {
    std::cerr << error_json(parsed.errors).dump() << '\n';
    std::exit(1);
  }
  return parsed.records;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Missing-information estimates and follow-up study design "
               "for binomial likelihood-ratio tests"};
  app.require_subcommand(1);

  GlobalOptions global;
  std::string log_base = "e";
  app.add_option("--log-base", log_base,
                 "Log base for displayed lod values: e or 10")
      ->check(CLI::IsMember({"e", "10"}));
  app.add_option("--eps-lod", global.eps_lod,
                 "Observed-lod stability threshold (natural-log units)")
      ->check(CLI::PositiveNumber);

  // estimate
  auto* estimate = app.add_subcommand(
      "estimate", "Per-variable information estimates from a study table");
  std::string est_input;
  std::string est_n1 = "full";
  std::string est_format = "csv";
  std::string est_output = "-";
  double est_default_p0 = 0.5;
  estimate->add_option("--input", est_input, "Study table CSV")->required();
  estimate->add_option("--n1", est_n1,
                       "Missing values to resolve per row: integer or 'full'");
  estimate->add_option("--format", est_format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  estimate->add_option("--output,-o", est_output, "Output path or -");
  estimate->add_option("--p0-default", est_default_p0,
                       "Null probability for rows with empty p0");

  // design
  auto* design = app.add_subcommand(
      "design", "Budget-optimal follow-up allocation across variables");
  std::string des_input;
  double des_budget = 0.0;
  std::string des_mode = "exact";
  std::string des_output = "-";
  double des_default_p0 = 0.5;
  bool des_oracle = false;
  design->add_option("--input", des_input, "Study table CSV")->required();
  design->add_option("--budget", des_budget, "Total follow-up budget")
      ->required()
      ->check(CLI::NonNegativeNumber);
  design->add_option("--mode", des_mode, "Solver mode")
      ->check(CLI::IsMember({"exact", "greedy"}));
  design->add_option("--output,-o", des_output, "Output path or -");
  design->add_option("--p0-default", des_default_p0,
                     "Null probability for rows with empty p0");
  design->add_flag("--oracle", des_oracle)->group("");  // testing hook

  // simulate
  auto* simulate = app.add_subcommand(
      "simulate",
      "Joint (observed, complete) lod distribution by seeded Monte Carlo");
  std::int64_t sim_n = 1000, sim_n0 = 800, sim_reps = 100000;
  double sim_true_p = 0.55, sim_p0 = 0.5, sim_floor = kRatioFloor;
  std::uint64_t sim_seed = 0;
  int sim_bins = 50, sim_threads = 1;
  std::vector<double> sim_ratio_lines;
  std::string sim_prefix = "simulate";
  simulate->add_option("--n", sim_n, "Total individuals")->required();
  simulate->add_option("--n0", sim_n0, "Observed individuals")->required();
  simulate->add_option("--true-p", sim_true_p, "True success probability")
      ->required();
  simulate->add_option("--p0", sim_p0, "Null success probability")->required();
  simulate->add_option("--reps", sim_reps, "Replicates")->required();
  simulate->add_option("--seed", sim_seed, "RNG seed (required: reproducible)")
      ->required();
  simulate->add_option("--bins", sim_bins, "Histogram bins per axis");
  simulate->add_option("--threads", sim_threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--ratio-lines", sim_ratio_lines,
                       "Extra reference ratios besides 1 and 1.25");
  simulate->add_option("--ratio-floor", sim_floor,
                       "Observed-lod floor for ratio statistics");
  simulate->add_option("--out-prefix", sim_prefix,
                       "Prefix for <prefix>_contour.csv, "
                       "<prefix>_reflines.csv, <prefix>_ratio_stats.json");

  // curves
  auto* curves = app.add_subcommand(
      "curves", "Plug-in sd of the inverse relative information vs x0");
  std::int64_t cur_n = 1000, cur_n0 = -1;
  double cur_p0 = 0.5;
  std::vector<double> cur_true_ps;
  std::string cur_output = "-";
  curves->add_option("--n", cur_n, "Total individuals")->required();
  curves->add_option("--n0", cur_n0,
                     "Observed individuals (default 0.8*n rounded)");
  curves->add_option("--p0", cur_p0, "Null success probability");
  curves->add_option("--true-p", cur_true_ps,
                     "True p values for density curves (default "
                     "0.55 0.6 0.7)");
  curves->add_option("--output,-o", cur_output, "Output path or -");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << error_json("UsageError", e.what()).dump() << '\n';
    return 2;
  }

  global.log_base = (log_base == "10") ? LogBase::ten : LogBase::natural;

  try {
    if (estimate->parsed()) {
      std::optional<std::int64_t> n1;
      if (est_n1 != "full") {
        try {
          n1 = std::stoll(est_n1);
        } catch (const std::exception&) {
          throw DomainError("--n1 must be an integer or 'full'");
        }
      }
      const auto records = load_table(est_input, est_default_p0);
      const EstimateReport report = run_estimate(records, n1, global);
      write_output(est_output,
                   est_format == "json"
                       ? estimate_to_json(report, global).dump(2) + "\n"
                       : estimate_to_csv(report));
    } else if (design->parsed()) {
      const auto records = load_table(des_input, des_default_p0);
      const SolveMode mode =
          des_mode == "greedy" ? SolveMode::greedy : SolveMode::exact;
      const DesignReport report =
          run_design(records, des_budget, mode, des_oracle, global);
      write_output(des_output, design_to_json(report, global).dump(2) + "\n");
    } else if (simulate->parsed()) {
      SimulateRequest request{
          SimConfig(sim_n, sim_n0, sim_true_p, sim_p0, sim_reps, sim_seed),
          sim_bins, sim_ratio_lines, sim_floor, sim_threads};
      const SimulateOutput out = run_simulate(request, global);
      write_output(sim_prefix + "_contour.csv", out.contour_csv);
      write_output(sim_prefix + "_reflines.csv", out.reference_lines_csv);
      write_output(sim_prefix + "_ratio_stats.json",
                   out.ratio_stats.dump(2) + "\n");
    } else if (curves->parsed()) {
      if (cur_n0 < 0) cur_n0 = (cur_n * 8 + 5) / 10;
      if (cur_true_ps.empty()) cur_true_ps = {0.55, 0.6, 0.7};
      write_output(cur_output,
                   run_curves_csv(cur_n, cur_n0, cur_p0, cur_true_ps, global));
    }
  } catch (const Error& e) {
    std::cerr << error_json(error_type(e), e.what()).dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << error_json("Error", e.what()).dump() << '\n';
    return 1;
  }
  return 0;
}
