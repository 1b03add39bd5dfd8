#include "study_table.hpp"

#include <array>
#include <charconv>
#include <cstdint>
#include <optional>
#include <set>

#include "relinfo/errors.hpp"

namespace relinfo::cli {

namespace {

constexpr std::array<std::string_view, 8> kColumns = {
    "id", "n", "n0", "x0", "p0", "unit_cost", "setup_cost", "max_resolvable"};
constexpr std::size_t kRequiredColumns = 5;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::optional<double> parse_real(std::string_view s) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

}  // namespace

ParseResult parse_study_table(std::string_view csv,
                              const TableOptions& options) {
  ParseResult result;

  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t nl = csv.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(csv.substr(start));
      break;
    }
    lines.push_back(csv.substr(start, nl - start));
    start = nl + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();

  if (lines.empty()) {
    result.errors.push_back({1, "empty input: header line required"});
    return result;
  }

  const auto header = split_fields(lines[0]);
  if (header.size() < kRequiredColumns || header.size() > kColumns.size()) {
    result.errors.push_back(
        {1, "header must list columns id,n,n0,x0,p0[,unit_cost[,setup_cost"
            "[,max_resolvable]]]"});
    return result;
  }
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] != kColumns[c]) {
      result.errors.push_back(
          {1, "unexpected column '" + std::string(header[c]) +
              "' at position " + std::to_string(c + 1) + ", expected '" +
              std::string(kColumns[c]) + "'"});
      return result;
    }
  }

  std::set<std::string> seen_ids;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    const int line_no = static_cast<int>(row) + 1;
    if (trim(lines[row]).empty()) continue;
    const auto fields = split_fields(lines[row]);
    if (fields.size() < kRequiredColumns || fields.size() > kColumns.size()) {
      result.errors.push_back(
          {line_no, "expected between " + std::to_string(kRequiredColumns) +
                        " and " + std::to_string(kColumns.size()) +
                        " fields, got " + std::to_string(fields.size())});
      continue;
    }

    auto field = [&](std::size_t c) -> std::string_view {
      return c < fields.size() ? fields[c] : std::string_view{};
    };

    const std::string id(field(0));
    if (id.empty()) {
      result.errors.push_back({line_no, "id must not be empty"});
      continue;
    }
    if (!seen_ids.insert(id).second) {
      result.errors.push_back({line_no, "duplicate id '" + id + "'"});
      continue;
    }

    const auto n = parse_int(field(1));
    const auto n0 = parse_int(field(2));
    const auto x0 = parse_int(field(3));
    if (!n || !n0 || !x0) {
      result.errors.push_back({line_no, "n, n0, x0 must be integers"});
      continue;
    }

    double p0 = options.default_p0;
    if (!field(4).empty()) {
      const auto parsed = parse_real(field(4));
      if (!parsed) {
        result.errors.push_back({line_no, "p0 must be a real number"});
        continue;
      }
      p0 = *parsed;
    }

    double unit_cost = 1.0;
    double setup_cost = 0.0;
    std::int64_t max_resolvable = -1;
    bool bad_optional = false;
    if (!field(5).empty()) {
      const auto parsed = parse_real(field(5));
      if (parsed) {
        unit_cost = *parsed;
      } else {
        result.errors.push_back({line_no, "unit_cost must be a real number"});
        bad_optional = true;
      }
    }
    if (!field(6).empty()) {
      const auto parsed = parse_real(field(6));
      if (parsed) {
        setup_cost = *parsed;
      } else {
        result.errors.push_back({line_no, "setup_cost must be a real number"});
        bad_optional = true;
      }
    }
    if (!field(7).empty()) {
      const auto parsed = parse_int(field(7));
      if (parsed) {
        max_resolvable = *parsed;
      } else {
        result.errors.push_back(
            {line_no, "max_resolvable must be an integer"});
        bad_optional = true;
      }
    }
    if (bad_optional) continue;

    try {
      result.records.emplace_back(id, StudyConfig(*n, *n0, *x0, p0),
                                  unit_cost, setup_cost, max_resolvable);
    } catch (const Error& e) {
      result.errors.push_back({line_no, e.what()});
    }
  }
  return result;
}

std::string write_study_table_csv(
    const std::vector<VariableRecord>& records) {
  std::string out = "id,n,n0,x0,p0,unit_cost,setup_cost,max_resolvable\n";
  for (const auto& record : records) {
    out += record.id;
    out += ',';
    out += std::to_string(record.cfg.n);
    out += ',';
    out += std::to_string(record.cfg.n0);
    out += ',';
    out += std::to_string(record.cfg.x0);
    out += ',';
    out += format_double(record.cfg.p0);
    out += ',';
    out += format_double(record.unit_cost);
    out += ',';
    out += format_double(record.setup_cost);
    out += ',';
    out += std::to_string(record.max_resolvable);
    out += '\n';
  }
  return out;
}

std::string format_double(double value) {
  std::array<char, 32> buffer{};
  const auto [ptr, ec] =
      std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), ptr);
}

}  // namespace relinfo::cli
