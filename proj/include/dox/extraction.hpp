#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dox/corpus.hpp"

namespace dox {

inline constexpr std::string_view kSubjectSlot = "{subj}";
inline constexpr std::string_view kObjectSlot = "{obj}";

// A clause as <subject, template, object>: the template is the clause text
// with the subject and object runs replaced by {subj} and {obj}.
struct TemplateTriplet {
  std::string subject;
  std::string template_text;
  std::string object;
  std::string doc_id;
  std::size_t sent_index = 0;
  std::string context;  // verbatim source sentence

  bool operator==(const TemplateTriplet&) const = default;
};

struct Detail {
  std::string id;
  std::string text;     // realized template
  std::string context;
  TemplateTriplet triplet;
  std::set<std::string> aspect_keys;

  // Normalized term sequences used for aspect matching.
  std::vector<std::string> subject_terms;
  std::vector<std::string> object_terms;
  std::vector<std::string> text_terms;
};

struct AspectNode {
  std::string key;
  std::set<std::string> surface_forms;
};

struct KnowledgeGraph {
  std::map<std::string, AspectNode> nodes;  // keyed by normalized phrase
  std::vector<Detail> edges;                // sorted by Detail::id
};

// Throws SchemaError unless the template holds each placeholder exactly once
// and subject/object are non-empty.
void validate_triplet(const TemplateTriplet& triplet);

std::string realize(const TemplateTriplet& triplet);

std::string detail_id(std::string_view text, std::string_view context);

// Baseline rule-based extractor, at most one triplet per clause candidate.
std::vector<TemplateTriplet> extract_triplets(const Sentence& sentence);

// Segments and extracts every document of the corpus, in corpus order.
std::vector<TemplateTriplet> extract_corpus(const Corpus& corpus);

// Maximal runs of content words (no stopwords, verbs, -ly adverbs or
// punctuation), returned as surface strings.
std::vector<std::string> noun_chunks(std::string_view phrase);

// Normalized aspect keys mentioned by a triplet: the whole subject and
// object phrases, every noun chunk of subject, object and template body,
// and the suffixes of multi-word chunks. Maps key -> surface forms.
std::map<std::string, std::set<std::string>> harvest_aspects(const TemplateTriplet& triplet);

Detail make_detail(const TemplateTriplet& triplet);

KnowledgeGraph build_graph(const std::vector<TemplateTriplet>& triplets);

std::set<std::string> known_aspects(const KnowledgeGraph& graph);

// Triplet JSONL. Invalid lines raise SchemaError carrying the 1-based line;
// records realizing an identical (text, context) pair are collapsed.
std::vector<TemplateTriplet> parse_triplets_jsonl(std::string_view data);
std::vector<TemplateTriplet> import_triplets(const std::filesystem::path& path);
std::string triplets_to_jsonl(const std::vector<TemplateTriplet>& triplets);

nlohmann::json graph_to_json(const KnowledgeGraph& graph);

}  // namespace dox
