#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dox/archetypes.hpp"
#include "dox/extraction.hpp"
#include "dox/pertinence.hpp"

namespace dox {

// An explanandum aspect: `key` is the normalized phrase used for matching,
// `surface` is what gets rendered into questions.
struct Aspect {
  std::string key;
  std::string surface;

  bool operator==(const Aspect&) const = default;
};

Aspect make_aspect(std::string_view phrase);

enum class MatchScope {
  kSubjectObject,  // aspect must occur in the subject or object phrase
  kExtended,       // ... or anywhere in the realized detail text
};

struct RunParams {
  double pertinence_threshold = 0.15;  // t
  double dedup_threshold = 0.97;       // r
  std::string archetype_selection = "all";
  std::string backend_id;
  std::vector<Aspect> aspects;  // A
  MatchScope match_scope = MatchScope::kExtended;
};

// Throws ConfigError unless 0 <= t <= 1, 0 < r <= 1 and A is non-empty.
void validate(const RunParams& params);

struct ExplanatoryIllocution {
  std::string aspect;
  std::map<std::string, double> scores;  // archetype id -> P
  std::map<std::string, std::vector<std::pair<std::string, double>>> contributing_details;
};

struct ArchetypeScore {
  std::string id;
  Tier tier = Tier::kPrimary;
  double value = 0.0;  // R
};

struct DoXResult {
  std::vector<ArchetypeScore> per_archetype;  // in Q order
  double average = 0.0;
  double primary_average = 0.0;
  double secondary_average = 0.0;
  double coverage = 0.0;
  RunParams params;
  std::vector<ExplanatoryIllocution> per_aspect;  // in A order
  std::size_t detail_count = 0;
  std::size_t aspect_count = 0;  // |I|
  std::vector<std::string> warnings;

  double r(std::string_view archetype_id) const;
};

// D_a, sorted by detail id.
std::vector<Detail> details_about(const KnowledgeGraph& graph, std::string_view aspect_key,
                                  MatchScope scope = MatchScope::kExtended);

// Greedy near-duplicate filter over scores for one question: visit in
// (p desc, detail id asc) order and keep a candidate iff its similarity to
// every kept detail is <= r. `details` must hold every scored detail.
std::vector<PertinenceScore> dedup(const std::vector<PertinenceScore>& scored,
                                   const std::vector<Detail>& details, double r,
                                   PertinenceEngine& engine);

// Sum of p >= t over (already deduplicated) scores, added in
// (p desc, detail id asc) order.
double cumulative_pertinence(const std::vector<PertinenceScore>& kept, double t);

ExplanatoryIllocution explanatory_illocution(const KnowledgeGraph& graph, const Aspect& aspect,
                                             const std::vector<Archetype>& archetypes,
                                             const RunParams& params, PertinenceEngine& engine);

DoXResult compute_dox(const KnowledgeGraph& graph, const RunParams& params,
                      const std::vector<Archetype>& archetypes, PertinenceEngine& engine);

// |A ∩ I| / |A|, where a ∈ I iff its key occurs as a contiguous term run
// inside some known aspect key.
double coverage(const std::vector<Aspect>& aspects, const std::set<std::string>& known);

// Plain means used by compute_dox; exposed for spot checks.
double mean_over_aspects(const std::vector<double>& cumulative_pertinences);
double mean_over_archetypes(const std::vector<double>& per_archetype);

}  // namespace dox
