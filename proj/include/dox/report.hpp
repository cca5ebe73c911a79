#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "dox/metric.hpp"

namespace dox {

enum class ReportFormat { kJson, kCsv, kTable };

ReportFormat parse_report_format(std::string_view name);

nlohmann::json report_json(const DoXResult& result);
std::string render_report(const DoXResult& result, ReportFormat format);

// Writes to a sibling temporary file and renames it over `path`; the target
// is never left half-written. Throws IoError.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

// Throws IoError if the file cannot be read and SchemaError if it is not a
// report.
nlohmann::json read_report(const std::filesystem::path& path);

enum class Verdict { kLeftGreater, kRightGreater, kTie };

std::string_view to_string(Verdict verdict);

struct ReportSummary {
  double average = 0.0;
  double coverage = 0.0;
  std::map<std::string, double> per_archetype;
};

struct ComparisonReport {
  ReportSummary left;
  ReportSummary right;
  std::map<std::string, double> deltas;  // right - left
  double average_delta = 0.0;
  Verdict verdict = Verdict::kTie;
};

// Throws ConfigError when the reports disagree on backend, t, r, archetype
// set or aspect set.
ComparisonReport compare_reports(const nlohmann::json& left, const nlohmann::json& right,
                                 double tolerance);

nlohmann::json comparison_json(const ComparisonReport& cmp);

struct GateOutcome {
  bool passed = true;
  std::string message;
};

GateOutcome gate_report(const nlohmann::json& report, double min_average, double min_coverage);

}  // namespace dox
