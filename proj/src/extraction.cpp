#include "dox/extraction.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <tuple>
#include <unordered_set>

#include "dox/error.hpp"
#include "dox/text.hpp"

namespace dox {
namespace {

using text::Token;

// Sentence openers dropped from the subject when a comma follows them.
const std::unordered_set<std::string_view>& openers() {
  static const std::unordered_set<std::string_view> kSet = {
      "however", "moreover", "furthermore", "therefore", "thus", "hence", "also", "indeed",
      "finally", "first", "second", "third", "instead", "overall", "additionally",
      "consequently", "otherwise", "meanwhile", "nevertheless", "still", "then", "so",
      "yet", "specifically", "notably", "importantly", "generally", "typically"};
  return kSet;
}

struct Span {
  std::size_t begin = 0;  // token indices, half open
  std::size_t end = 0;
  bool empty() const { return begin >= end; }
};

class ClauseParser {
 public:
  explicit ClauseParser(std::string_view sentence)
      : sentence_(sentence), tokens_(text::tokenize(sentence)) {
    lower_.reserve(tokens_.size());
    for (const Token& t : tokens_) lower_.push_back(text::to_lower(t.text));
  }

  std::vector<Span> clauses() const {
    std::vector<Span> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      const std::string& t = tokens_[i].text;
      if (t == ";") {
        out.push_back({start, i});
        start = i + 1;
      } else if (t == "," && i + 1 < tokens_.size() && is_word(i + 1) &&
                 text::is_clause_conjunction(lower_[i + 1])) {
        out.push_back({start, i});
        start = i + 1;
      }
    }
    out.push_back({start, tokens_.size()});
    std::erase_if(out, [](const Span& s) { return s.empty(); });
    return out;
  }

  std::optional<TemplateTriplet> triplet(const Span& clause) const {
    std::size_t s0 = skip_conjunctions(clause.begin, clause.end);
    auto verb = find_verb(s0 + 1, clause.end);
    if (!verb) return std::nullopt;

    // Leading adverbial such as "In particular," or "However,".
    const std::size_t comma = find_token(",", s0, *verb);
    if (comma < *verb && is_opener(s0)) {
      s0 = skip_conjunctions(comma + 1, clause.end);
      verb = find_verb(s0 + 1, clause.end);
      if (!verb) return std::nullopt;
    }

    Span subject = trim_punct({s0, *verb});
    if (!has_word(subject)) return std::nullopt;

    const std::size_t group_end = verb_group_end(*verb, clause.end);
    Span object = trim_punct({group_end, clause.end});
    if (!object.empty() && text::is_subordinator(lower_[object.begin])) {
      // "X happens when Y does not get enough Z": the object is the
      // complement of the embedded verb group.
      if (auto inner = find_verb(object.begin + 2, object.end)) {
        Span embedded = trim_punct({verb_group_end(*inner, object.end), object.end});
        if (has_word(embedded)) object = embedded;
      }
    }
    if (!has_word(object)) return std::nullopt;

    const std::size_t clause_b = tokens_[clause.begin].begin;
    const std::size_t clause_e = tokens_[clause.end - 1].end;
    const std::size_t subj_b = tokens_[subject.begin].begin;
    const std::size_t subj_e = tokens_[subject.end - 1].end;
    const std::size_t obj_b = tokens_[object.begin].begin;
    const std::size_t obj_e = tokens_[object.end - 1].end;

    TemplateTriplet out;
    out.subject = std::string(sentence_.substr(subj_b, subj_e - subj_b));
    out.object = std::string(sentence_.substr(obj_b, obj_e - obj_b));
    out.template_text = std::string(sentence_.substr(clause_b, subj_b - clause_b));
    out.template_text += kSubjectSlot;
    out.template_text += sentence_.substr(subj_e, obj_b - subj_e);
    out.template_text += kObjectSlot;
    out.template_text += sentence_.substr(obj_e, clause_e - obj_e);
    out.context = std::string(sentence_);
    return out;
  }

 private:
  bool is_word(std::size_t i) const { return tokens_[i].is_word(); }

  bool has_word(const Span& s) const {
    for (std::size_t i = s.begin; i < s.end; ++i) {
      if (is_word(i)) return true;
    }
    return false;
  }

  Span trim_punct(Span s) const {
    while (s.begin < s.end && !is_word(s.begin)) ++s.begin;
    while (s.end > s.begin && !is_word(s.end - 1)) --s.end;
    return s;
  }

  std::size_t find_token(std::string_view t, std::size_t b, std::size_t e) const {
    for (std::size_t i = b; i < e; ++i) {
      if (tokens_[i].text == t) return i;
    }
    return e;
  }

  std::size_t skip_conjunctions(std::size_t b, std::size_t e) const {
    while (b < e && (!is_word(b) || text::is_clause_conjunction(lower_[b]) ||
                     text::is_subordinator(lower_[b]))) {
      ++b;
    }
    return b;
  }

  bool is_opener(std::size_t i) const {
    const std::string& w = lower_[i];
    return text::is_preposition(w) || openers().contains(w) ||
           (w.size() > 4 && w.ends_with("ly"));
  }

  bool blocks_verb(std::size_t i) const {
    // "the score", "of having": a determiner or preposition before a
    // candidate marks it as nominal.
    if (i == 0 || !is_word(i - 1)) return false;
    return text::is_determiner(lower_[i - 1]) || text::is_preposition(lower_[i - 1]);
  }

  std::optional<std::size_t> find_verb(std::size_t b, std::size_t e) const {
    for (std::size_t i = b; i < e; ++i) {
      if (is_word(i) && text::is_verb(lower_[i]) && !blocks_verb(i)) return i;
    }
    // Suffix heuristic: an inflected non-stopword right after a content word.
    for (std::size_t i = b; i < e; ++i) {
      if (!is_word(i) || i == 0 || !is_word(i - 1)) continue;
      const std::string& w = lower_[i];
      if (w.size() <= 3 || text::is_stopword(w) || text::is_stopword(lower_[i - 1])) continue;
      const bool inflected = w.ends_with("ed") || w.ends_with("ing") ||
                             (w.ends_with("s") && !w.ends_with("ss") && !w.ends_with("us") &&
                              !w.ends_with("is"));
      if (inflected && !blocks_verb(i)) return i;
    }
    return std::nullopt;
  }

  std::size_t verb_group_end(std::size_t verb, std::size_t e) const {
    static const std::unordered_set<std::string_view> kAux = {
        "be", "am", "is", "are", "was", "were", "been", "being",
        "have", "has", "had", "do", "does", "did"};
    std::size_t j = verb + 1;
    while (j < e && is_word(j)) {
      const std::string& w = lower_[j];
      const bool after_aux = kAux.contains(lower_[j - 1]);
      if (text::is_verb(w) || text::is_verb_modifier(w) || (w.size() > 4 && w.ends_with("ly")) ||
          (after_aux && (w.ends_with("ed") || w.ends_with("en")))) {
        ++j;
      } else {
        break;
      }
    }
    return j;
  }

  std::string_view sentence_;
  std::vector<Token> tokens_;
  std::vector<std::string> lower_;
};

void add_chunk_keys(std::string_view phrase, std::map<std::string, std::set<std::string>>& out) {
  for (const std::string& chunk : noun_chunks(phrase)) {
    const auto toks = text::tokenize(chunk);
    const std::string key = text::normalize_phrase(chunk);
    if (key.empty()) continue;
    out[key].insert(chunk);
    for (std::size_t k = 1; k < toks.size(); ++k) {
      const std::string suffix = chunk.substr(toks[k].begin);
      const std::string suffix_key = text::normalize_phrase(suffix);
      if (!suffix_key.empty()) out[suffix_key].insert(suffix);
    }
  }
}

std::size_t count_occurrences(std::string_view haystack, std::string_view needle) {
  std::size_t n = 0;
  for (std::size_t pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + 1)) {
    ++n;
  }
  return n;
}

std::string require_string(const nlohmann::json& rec, const char* field, std::size_t line) {
  if (!rec.contains(field) || !rec[field].is_string()) {
    throw SchemaError(std::string("missing string field \"") + field + "\"", line);
  }
  return rec[field].get<std::string>();
}

}  // namespace

void validate_triplet(const TemplateTriplet& t) {
  if (count_occurrences(t.template_text, kSubjectSlot) != 1) {
    throw SchemaError("template must contain {subj} exactly once");
  }
  if (count_occurrences(t.template_text, kObjectSlot) != 1) {
    throw SchemaError("template must contain {obj} exactly once");
  }
  if (t.subject.empty()) throw SchemaError("empty subject");
  if (t.object.empty()) throw SchemaError("empty object");
}

std::string realize(const TemplateTriplet& t) {
  const std::string& tpl = t.template_text;
  const std::size_t s = tpl.find(kSubjectSlot);
  const std::size_t o = tpl.find(kObjectSlot);
  if (s == std::string::npos || o == std::string::npos) return tpl;
  std::string out;
  out.reserve(tpl.size() + t.subject.size() + t.object.size());
  if (s < o) {
    out += tpl.substr(0, s);
    out += t.subject;
    out += tpl.substr(s + kSubjectSlot.size(), o - s - kSubjectSlot.size());
    out += t.object;
    out += tpl.substr(o + kObjectSlot.size());
  } else {
    out += tpl.substr(0, o);
    out += t.object;
    out += tpl.substr(o + kObjectSlot.size(), s - o - kObjectSlot.size());
    out += t.subject;
    out += tpl.substr(s + kSubjectSlot.size());
  }
  return out;
}

std::string detail_id(std::string_view text, std::string_view context) {
  std::string key(text);
  key.push_back('\x1f');
  key += context;
  return text::sha256_hex(key).substr(0, 16);
}

std::vector<TemplateTriplet> extract_triplets(const Sentence& sentence) {
  std::vector<TemplateTriplet> out;
  if (text::trim(sentence.text).empty()) return out;
  ClauseParser parser(sentence.text);
  for (const Span& clause : parser.clauses()) {
    auto t = parser.triplet(clause);
    if (!t) continue;
    t->doc_id = sentence.doc_id;
    t->sent_index = sentence.index;
    // Sentences that literally contain a placeholder cannot be templated.
    if (count_occurrences(t->template_text, kSubjectSlot) != 1 ||
        count_occurrences(t->template_text, kObjectSlot) != 1) {
      continue;
    }
    out.push_back(std::move(*t));
  }
  return out;
}

std::vector<TemplateTriplet> extract_corpus(const Corpus& corpus) {
  std::vector<TemplateTriplet> out;
  for (const Document& doc : corpus) {
    for (const Sentence& s : segment_sentences(doc)) {
      auto ts = extract_triplets(s);
      out.insert(out.end(), std::make_move_iterator(ts.begin()), std::make_move_iterator(ts.end()));
    }
  }
  return out;
}

std::vector<std::string> noun_chunks(std::string_view phrase) {
  std::vector<std::string> out;
  const auto toks = text::tokenize(phrase);
  std::size_t i = 0;
  while (i < toks.size()) {
    if (!toks[i].is_word() || !text::is_content_word(text::to_lower(toks[i].text))) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < toks.size() && toks[j].is_word() &&
           text::is_content_word(text::to_lower(toks[j].text))) {
      ++j;
    }
    out.emplace_back(phrase.substr(toks[i].begin, toks[j - 1].end - toks[i].begin));
    i = j;
  }
  return out;
}

std::map<std::string, std::set<std::string>> harvest_aspects(const TemplateTriplet& t) {
  std::map<std::string, std::set<std::string>> out;
  for (const std::string* phrase : {&t.subject, &t.object}) {
    const std::string key = text::normalize_phrase(*phrase);
    if (!key.empty()) out[key].insert(*phrase);
    add_chunk_keys(*phrase, out);
  }
  // Literal template pieces between the placeholders.
  std::string body = t.template_text;
  for (std::string_view slot : {kSubjectSlot, kObjectSlot}) {
    if (auto pos = body.find(slot); pos != std::string::npos) body.replace(pos, slot.size(), "\n");
  }
  std::istringstream pieces(body);
  std::string piece;
  while (std::getline(pieces, piece)) add_chunk_keys(piece, out);
  return out;
}

Detail make_detail(const TemplateTriplet& t) {
  Detail d;
  d.text = realize(t);
  d.context = t.context;
  d.id = detail_id(d.text, d.context);
  d.triplet = t;
  for (auto& [key, forms] : harvest_aspects(t)) d.aspect_keys.insert(key);
  d.subject_terms = text::normalize_terms(t.subject);
  d.object_terms = text::normalize_terms(t.object);
  d.text_terms = text::normalize_terms(d.text);
  return d;
}

KnowledgeGraph build_graph(const std::vector<TemplateTriplet>& triplets) {
  auto order = [](const TemplateTriplet& t) {
    return std::tie(t.doc_id, t.sent_index, t.subject, t.template_text, t.object);
  };
  std::map<std::string, Detail> by_id;
  KnowledgeGraph g;
  for (const TemplateTriplet& t : triplets) {
    Detail d = make_detail(t);
    for (auto& [key, forms] : harvest_aspects(t)) {
      AspectNode& node = g.nodes[key];
      node.key = key;
      node.surface_forms.insert(forms.begin(), forms.end());
    }
    auto [it, inserted] = by_id.try_emplace(d.id, d);
    // Keep the smallest source triplet so the graph does not depend on
    // input order.
    if (!inserted && order(t) < order(it->second.triplet)) it->second = std::move(d);
  }
  g.edges.reserve(by_id.size());
  for (auto& [id, d] : by_id) g.edges.push_back(std::move(d));
  return g;
}

std::set<std::string> known_aspects(const KnowledgeGraph& graph) {
  std::set<std::string> out;
  for (const auto& [key, node] : graph.nodes) out.insert(key);
  return out;
}

std::vector<TemplateTriplet> parse_triplets_jsonl(std::string_view data) {
  std::vector<TemplateTriplet> out;
  std::set<std::pair<std::string, std::string>> seen;
  std::istringstream lines{std::string(data)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(std::string("invalid JSON: ") + e.what(), lineno);
    }
    if (!rec.is_object()) throw SchemaError("record is not an object", lineno);
    TemplateTriplet t;
    t.subject = require_string(rec, "subject", lineno);
    t.template_text = require_string(rec, "template", lineno);
    t.object = require_string(rec, "object", lineno);
    t.doc_id = require_string(rec, "doc_id", lineno);
    t.context = require_string(rec, "context", lineno);
    if (!rec.contains("sent_index") || !rec["sent_index"].is_number_unsigned()) {
      throw SchemaError("missing non-negative integer field \"sent_index\"", lineno);
    }
    t.sent_index = rec["sent_index"].get<std::size_t>();
    try {
      validate_triplet(t);
    } catch (const SchemaError& e) {
      throw SchemaError(e.what(), lineno);
    }
    if (seen.emplace(realize(t), t.context).second) out.push_back(std::move(t));
  }
  return out;
}

std::vector<TemplateTriplet> import_triplets(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_triplets_jsonl(ss.str());
}

std::string triplets_to_jsonl(const std::vector<TemplateTriplet>& triplets) {
  std::string out;
  for (const TemplateTriplet& t : triplets) {
    nlohmann::json rec = {{"subject", t.subject},   {"template", t.template_text},
                          {"object", t.object},     {"doc_id", t.doc_id},
                          {"sent_index", t.sent_index}, {"context", t.context}};
    out += rec.dump();
    out.push_back('\n');
  }
  return out;
}

nlohmann::json graph_to_json(const KnowledgeGraph& graph) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& [key, node] : graph.nodes) {
    nodes.push_back({{"key", key}, {"surface_forms", node.surface_forms}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const Detail& d : graph.edges) {
    edges.push_back({{"id", d.id},
                     {"text", d.text},
                     {"context", d.context},
                     {"aspect_keys", d.aspect_keys}});
  }
  return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

}  // namespace dox
