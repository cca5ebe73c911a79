#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace dox {

enum class Tier { kPrimary, kSecondary };

enum class TierSelection { kPrimary, kSecondary, kAll };

std::string_view to_string(Tier tier);

struct Archetype {
  std::string id;
  Tier tier = Tier::kPrimary;
  std::string label;
  // One or more renderings, each holding {aspect} exactly once. Pertinence
  // over several renderings is max-pooled.
  std::vector<std::string> templates;
};

struct ArchetypalQuestion {
  std::string archetype_id;
  std::string aspect;
  std::string text;
};

// 8 primary (what, who, how, where, when, which, whose, why) followed by the
// 17 discourse-relation archetypes, in that fixed order.
std::vector<Archetype> default_archetypes(TierSelection tier = TierSelection::kAll);

// Renders the first template. Throws std::invalid_argument on an empty aspect.
ArchetypalQuestion render_question(const Archetype& archetype, std::string_view aspect);

// One question per template.
std::vector<ArchetypalQuestion> render_questions(const Archetype& archetype,
                                                 std::string_view aspect);

// Throws SchemaError on a missing placeholder or a malformed entry.
void validate_archetype(const Archetype& archetype);

// Parses a JSON archetype list. Entries whose id matches a default archetype
// replace it in place; new ids are appended. Duplicate ids within the file
// are rejected.
std::vector<Archetype> parse_custom_archetypes(std::string_view json_text,
                                               std::vector<Archetype> base = default_archetypes());
std::vector<Archetype> load_custom_archetypes(const std::filesystem::path& path,
                                              std::vector<Archetype> base = default_archetypes());

}  // namespace dox
