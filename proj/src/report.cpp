#include "dox/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "dox/error.hpp"

namespace dox {
namespace {

std::string fixed(double v, int digits = 4) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(digits) << v;
  return ss.str();
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string render_csv(const DoXResult& r) {
  std::string out = "archetype,tier,dox\n";
  for (const ArchetypeScore& s : r.per_archetype) {
    std::ostringstream line;
    line << std::setprecision(17) << csv_field(s.id) << ',' << to_string(s.tier) << ','
         << s.value << '\n';
    out += line.str();
  }
  return out;
}

std::string render_table(const DoXResult& r) {
  std::vector<ArchetypeScore> rows = r.per_archetype;
  std::stable_sort(rows.begin(), rows.end(), [](const ArchetypeScore& a, const ArchetypeScore& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.id < b.id;
  });
  std::size_t width = 9;
  for (const ArchetypeScore& s : rows) width = std::max(width, s.id.size());

  std::ostringstream ss;
  ss << std::left << std::setw(static_cast<int>(width)) << "Archetype" << "  "
     << std::setw(9) << "Tier" << "  DoX\n";
  ss << std::string(width + 19, '-') << '\n';
  for (const ArchetypeScore& s : rows) {
    ss << std::left << std::setw(static_cast<int>(width)) << s.id << "  " << std::setw(9)
       << to_string(s.tier) << "  " << fixed(s.value) << '\n';
  }
  ss << std::string(width + 19, '-') << '\n';
  ss << "Average DoX:          " << fixed(r.average) << '\n';
  ss << "  primary archetypes: " << fixed(r.primary_average) << '\n';
  ss << "  secondary:          " << fixed(r.secondary_average) << '\n';
  ss << "Aspect coverage:      " << fixed(r.coverage * 100.0, 1) << "%\n";
  ss << "Details: " << r.detail_count << ", known aspects: " << r.aspect_count << '\n';
  return ss.str();
}

ReportSummary summarize(const nlohmann::json& report) {
  ReportSummary s;
  try {
    s.average = report.at("average").get<double>();
    s.coverage = report.at("coverage").get<double>();
    for (const auto& [id, v] : report.at("per_archetype").items()) {
      s.per_archetype[id] = v.get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("not a DoX report: ") + e.what());
  }
  return s;
}

std::vector<std::string> sorted_strings(const nlohmann::json& arr) {
  std::vector<std::string> out = arr.get<std::vector<std::string>>();
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "table") return ReportFormat::kTable;
  throw ConfigError("unknown report format \"" + std::string(name) + "\" (json|csv|table)");
}

nlohmann::json report_json(const DoXResult& r) {
  nlohmann::json per_archetype = nlohmann::json::object();
  nlohmann::json archetype_ids = nlohmann::json::array();
  for (const ArchetypeScore& s : r.per_archetype) {
    per_archetype[s.id] = s.value;
    archetype_ids.push_back(s.id);
  }
  nlohmann::json aspects = nlohmann::json::array();
  for (const Aspect& a : r.params.aspects) aspects.push_back(a.key);

  nlohmann::json per_aspect = nlohmann::json::array();
  for (const ExplanatoryIllocution& e : r.per_aspect) {
    nlohmann::json contrib = nlohmann::json::object();
    for (const auto& [id, list] : e.contributing_details) {
      nlohmann::json items = nlohmann::json::array();
      for (const auto& [detail, p] : list) items.push_back({{"detail_id", detail}, {"p", p}});
      contrib[id] = std::move(items);
    }
    per_aspect.push_back(
        {{"aspect", e.aspect}, {"scores", e.scores}, {"contributing_details", std::move(contrib)}});
  }

  return {
      {"params",
       {{"t", r.params.pertinence_threshold},
        {"r", r.params.dedup_threshold},
        {"backend_id", r.params.backend_id},
        {"archetype_selection", r.params.archetype_selection},
        {"archetypes", std::move(archetype_ids)},
        {"aspects", std::move(aspects)},
        {"match_scope",
         r.params.match_scope == MatchScope::kExtended ? "extended" : "subject-object"}}},
      {"per_archetype", std::move(per_archetype)},
      {"average", r.average},
      {"primary_average", r.primary_average},
      {"secondary_average", r.secondary_average},
      {"coverage", r.coverage},
      {"per_aspect", std::move(per_aspect)},
      {"counts", {{"details", r.detail_count}, {"aspects_known", r.aspect_count}}},
      {"warnings", r.warnings},
  };
}

std::string render_report(const DoXResult& result, ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson:
      return report_json(result).dump(2) + "\n";
    case ReportFormat::kCsv:
      return render_csv(result);
    case ReportFormat::kTable:
      return render_table(result);
  }
  return {};
}

void write_atomic(const std::filesystem::path& path, std::string_view contents) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::random_device rd;
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(rd()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move report into place at " + path.string());
  }
}

nlohmann::json read_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read report " + path.string());
  nlohmann::json report;
  try {
    report = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("cannot parse report " + path.string() + ": " + e.what());
  }
  if (!report.is_object() || !report.contains("average") || !report.contains("coverage") ||
      !report.contains("params") || !report.contains("per_archetype")) {
    throw IoError("not a DoX report: " + path.string());
  }
  return report;
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kLeftGreater:
      return "left>right";
    case Verdict::kRightGreater:
      return "right>left";
    case Verdict::kTie:
      return "tie";
  }
  return "tie";
}

ComparisonReport compare_reports(const nlohmann::json& left, const nlohmann::json& right,
                                 double tolerance) {
  try {
    const auto& lp = left.at("params");
    const auto& rp = right.at("params");
    if (lp.at("backend_id") != rp.at("backend_id")) {
      throw ConfigError("reports were computed with different backends");
    }
    if (lp.at("t") != rp.at("t")) throw ConfigError("reports differ in pertinence threshold t");
    if (lp.at("r") != rp.at("r")) throw ConfigError("reports differ in dedup threshold r");
    if (sorted_strings(lp.at("archetypes")) != sorted_strings(rp.at("archetypes"))) {
      throw ConfigError("reports differ in archetype set");
    }
    if (sorted_strings(lp.at("aspects")) != sorted_strings(rp.at("aspects"))) {
      throw ConfigError("reports differ in aspect set");
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed report params: ") + e.what());
  }

  ComparisonReport cmp;
  cmp.left = summarize(left);
  cmp.right = summarize(right);
  for (const auto& [id, lv] : cmp.left.per_archetype) {
    cmp.deltas[id] = cmp.right.per_archetype.at(id) - lv;
  }
  cmp.average_delta = cmp.right.average - cmp.left.average;
  if (std::abs(cmp.average_delta) <= tolerance) {
    cmp.verdict = Verdict::kTie;
  } else {
    cmp.verdict = cmp.average_delta > 0 ? Verdict::kRightGreater : Verdict::kLeftGreater;
  }
  return cmp;
}

nlohmann::json comparison_json(const ComparisonReport& cmp) {
  return {{"left", {{"average", cmp.left.average}, {"coverage", cmp.left.coverage}}},
          {"right", {{"average", cmp.right.average}, {"coverage", cmp.right.coverage}}},
          {"deltas", cmp.deltas},
          {"average_delta", cmp.average_delta},
          {"verdict", std::string(to_string(cmp.verdict))}};
}

GateOutcome gate_report(const nlohmann::json& report, double min_average, double min_coverage) {
  const ReportSummary s = summarize(report);
  GateOutcome out;
  std::ostringstream msg;
  if (s.average < min_average) {
    out.passed = false;
    msg << "average DoX " << s.average << " < required " << min_average << "\n";
  }
  if (s.coverage < min_coverage) {
    out.passed = false;
    msg << "aspect coverage " << s.coverage << " < required " << min_coverage << "\n";
  }
  if (out.passed) {
    msg << "gate passed: average " << s.average << ", coverage " << s.coverage << "\n";
  }
  out.message = msg.str();
  return out;
}

}  // namespace dox
