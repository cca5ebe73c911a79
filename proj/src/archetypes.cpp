#include "dox/archetypes.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dox/error.hpp"

namespace dox {
namespace {

constexpr std::string_view kAspectSlot = "{aspect}";

struct Entry {
  const char* id;
  Tier tier;
  const char* label;
  const char* tpl;
};

constexpr Entry kDefaults[] = {
    {"what", Tier::kPrimary, "what", "What is {aspect}?"},
    {"who", Tier::kPrimary, "who", "Who {aspect}?"},
    {"how", Tier::kPrimary, "how", "How {aspect}?"},
    {"where", Tier::kPrimary, "where", "Where {aspect}?"},
    {"when", Tier::kPrimary, "when", "When {aspect}?"},
    {"which", Tier::kPrimary, "which", "Which {aspect}?"},
    {"whose", Tier::kPrimary, "whose", "Whose {aspect}?"},
    {"why", Tier::kPrimary, "why", "Why {aspect}?"},
    {"in-what-manner", Tier::kSecondary, "in what manner", "In what manner {aspect}?"},
    {"what-is-the-reason", Tier::kSecondary, "what is the reason", "What is the reason of {aspect}?"},
    {"what-is-the-result", Tier::kSecondary, "what is the result", "What is the result of {aspect}?"},
    {"after-what", Tier::kSecondary, "after what", "After what {aspect}?"},
    {"what-is-an-example", Tier::kSecondary, "what is an example", "What is an example of {aspect}?"},
    {"while-what", Tier::kSecondary, "while what", "While what {aspect}?"},
    {"in-what-case", Tier::kSecondary, "in what case", "In what case {aspect}?"},
    {"since-when", Tier::kSecondary, "since when", "Since when {aspect}?"},
    {"what-is-contrasted-with", Tier::kSecondary, "what is contrasted with", "What is contrasted with {aspect}?"},
    {"before-what", Tier::kSecondary, "before what", "Before what {aspect}?"},
    {"despite-what", Tier::kSecondary, "despite what", "Despite what {aspect}?"},
    {"what-is-an-alternative", Tier::kSecondary, "what is an alternative", "What is an alternative to {aspect}?"},
    {"unless-what", Tier::kSecondary, "unless what", "Unless what {aspect}?"},
    {"instead-of-what", Tier::kSecondary, "instead of what", "Instead of what {aspect}?"},
    {"what-is-similar", Tier::kSecondary, "what is similar", "What is similar to {aspect}?"},
    {"except-when", Tier::kSecondary, "except when", "Except when {aspect}?"},
    {"until-when", Tier::kSecondary, "until when", "Until when {aspect}?"},
};

std::size_t count_slots(std::string_view s) {
  std::size_t n = 0;
  for (auto pos = s.find(kAspectSlot); pos != std::string_view::npos;
       pos = s.find(kAspectSlot, pos + 1)) {
    ++n;
  }
  return n;
}

std::string render(std::string_view tpl, std::string_view aspect) {
  std::string out(tpl);
  const auto pos = out.find(kAspectSlot);
  out.replace(pos, kAspectSlot.size(), aspect);
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  if (out.empty() || out.back() != '?') out.push_back('?');
  return out;
}

}  // namespace

std::string_view to_string(Tier tier) {
  return tier == Tier::kPrimary ? "primary" : "secondary";
}

std::vector<Archetype> default_archetypes(TierSelection tier) {
  std::vector<Archetype> out;
  for (const Entry& e : kDefaults) {
    if (tier == TierSelection::kPrimary && e.tier != Tier::kPrimary) continue;
    if (tier == TierSelection::kSecondary && e.tier != Tier::kSecondary) continue;
    out.push_back({e.id, e.tier, e.label, {e.tpl}});
  }
  return out;
}

ArchetypalQuestion render_question(const Archetype& archetype, std::string_view aspect) {
  if (aspect.empty()) throw std::invalid_argument("empty aspect for archetype " + archetype.id);
  if (archetype.templates.empty()) throw std::invalid_argument("archetype " + archetype.id + " has no template");
  return {archetype.id, std::string(aspect), render(archetype.templates.front(), aspect)};
}

std::vector<ArchetypalQuestion> render_questions(const Archetype& archetype,
                                                 std::string_view aspect) {
  if (aspect.empty()) throw std::invalid_argument("empty aspect for archetype " + archetype.id);
  std::vector<ArchetypalQuestion> out;
  for (const std::string& tpl : archetype.templates) {
    out.push_back({archetype.id, std::string(aspect), render(tpl, aspect)});
  }
  return out;
}

void validate_archetype(const Archetype& a) {
  if (a.id.empty()) throw SchemaError("archetype with empty id");
  if (a.templates.empty()) throw SchemaError("archetype " + a.id + " has no templates");
  for (const std::string& tpl : a.templates) {
    if (count_slots(tpl) != 1) {
      throw SchemaError("archetype " + a.id + ": template \"" + tpl +
                        "\" must contain {aspect} exactly once");
    }
  }
}

std::vector<Archetype> parse_custom_archetypes(std::string_view json_text,
                                               std::vector<Archetype> base) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("archetype config is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw SchemaError("archetype config must be a JSON array");

  std::set<std::string> seen;
  for (const auto& rec : doc) {
    if (!rec.is_object() || !rec.contains("id") || !rec["id"].is_string()) {
      throw SchemaError("archetype entry without string \"id\"");
    }
    Archetype a;
    a.id = rec["id"].get<std::string>();
    if (!seen.insert(a.id).second) throw SchemaError("duplicate archetype id \"" + a.id + "\"");
    const std::string tier = rec.value("tier", std::string("secondary"));
    if (tier == "primary") {
      a.tier = Tier::kPrimary;
    } else if (tier == "secondary") {
      a.tier = Tier::kSecondary;
    } else {
      throw SchemaError("archetype " + a.id + ": tier must be primary or secondary");
    }
    a.label = rec.value("label", a.id);
    if (!rec.contains("templates") || !rec["templates"].is_array()) {
      throw SchemaError("archetype " + a.id + ": missing \"templates\" array");
    }
    for (const auto& t : rec["templates"]) {
      if (!t.is_string()) throw SchemaError("archetype " + a.id + ": templates must be strings");
      a.templates.push_back(t.get<std::string>());
    }
    validate_archetype(a);

    auto it = std::find_if(base.begin(), base.end(),
                           [&](const Archetype& b) { return b.id == a.id; });
    if (it != base.end()) {
      *it = std::move(a);
    } else {
      base.push_back(std::move(a));
    }
  }
  return base;
}

std::vector<Archetype> load_custom_archetypes(const std::filesystem::path& path,
                                              std::vector<Archetype> base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read archetype config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_custom_archetypes(ss.str(), std::move(base));
}

}  // namespace dox
