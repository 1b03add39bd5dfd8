#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "relinfo/design.hpp"

namespace relinfo::cli {

struct TableOptions {
  double default_p0 = 0.5;  // used when a row leaves the p0 cell empty
};

struct RowError {
  int line;  // 1-based, counting the header as line 1
  std::string message;
};

struct ParseResult {
  std::vector<VariableRecord> records;
  std::vector<RowError> errors;

  bool ok() const { return errors.empty(); }
};

// Parses a study table. Columns: id,n,n0,x0,p0[,unit_cost[,setup_cost
// [,max_resolvable]]]; header required; '.' decimal separator; optional
// trailing columns may be omitted or left empty (defaults 1.0, 0.0, n-n0).
// All row problems are collected rather than aborting at the first.
ParseResult parse_study_table(std::string_view csv,
                              const TableOptions& options = {});

// Inverse of parse_study_table: full 8-column CSV that reparses to
// identical records.
std::string write_study_table_csv(const std::vector<VariableRecord>& records);

// Shortest decimal form that round-trips the exact double.
std::string format_double(double value);

}  // namespace relinfo::cli
