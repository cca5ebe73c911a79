#include "dox/metric.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

#include "dox/error.hpp"
#include "dox/text.hpp"

namespace dox {
namespace {

bool score_order(const PertinenceScore& a, const PertinenceScore& b) {
  if (a.p != b.p) return a.p > b.p;
  return a.detail_id < b.detail_id;
}

using SimilarityFn = std::function<double(std::size_t, std::size_t)>;

// `index_of` maps each score to a position understood by `sim`.
std::vector<PertinenceScore> greedy_dedup(std::vector<PertinenceScore> scored,
                                          const std::vector<std::size_t>& index_of, double r,
                                          const SimilarityFn& sim) {
  std::vector<std::size_t> order(scored.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return score_order(scored[a], scored[b]); });

  std::vector<std::size_t> kept;
  for (std::size_t cand : order) {
    const bool redundant = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return sim(index_of[cand], index_of[k]) > r;
    });
    if (!redundant) kept.push_back(cand);
  }
  std::vector<PertinenceScore> out;
  out.reserve(kept.size());
  for (std::size_t k : kept) out.push_back(std::move(scored[k]));
  return out;
}

bool matches(const Detail& d, const std::vector<std::string>& aspect_terms, MatchScope scope) {
  if (text::contains_sequence(d.subject_terms, aspect_terms) ||
      text::contains_sequence(d.object_terms, aspect_terms)) {
    return true;
  }
  return scope == MatchScope::kExtended && text::contains_sequence(d.text_terms, aspect_terms);
}

// Pre-embedded view of the details and questions of one run.
class ScoringTable {
 public:
  ScoringTable(const std::vector<const Detail*>& details,
               const std::vector<std::string>& questions, PertinenceEngine& engine) {
    std::vector<std::string> passages;
    std::vector<std::string> texts;
    for (const Detail* d : details) {
      index_.emplace(d->id, passages.size());
      passages.push_back(passage_text(*d));
      texts.push_back(d->text);
    }
    if (!details.empty()) {
      passage_vecs_ = engine.embed(passages, Role::kPassage);
      text_vecs_ = engine.embed(texts, Role::kPassage);
    }
    if (!questions.empty()) {
      auto qv = engine.embed(questions, Role::kQuery);
      for (std::size_t i = 0; i < questions.size(); ++i) query_vecs_.emplace(questions[i], std::move(qv[i]));
    }
    sim_.assign(details.size() * details.size(), -1.0);
  }

  std::size_t index(const std::string& detail_id) const { return index_.at(detail_id); }

  double pertinence(std::size_t detail, const std::string& question) const {
    return std::clamp(cosine(passage_vecs_[detail], query_vecs_.at(question)), 0.0, 1.0);
  }

  double similarity(std::size_t a, std::size_t b) {
    double& cell = sim_[a * passage_vecs_.size() + b];
    if (cell < 0.0) {
      cell = std::clamp(cosine(text_vecs_[a], text_vecs_[b]), 0.0, 1.0);
      sim_[b * passage_vecs_.size() + a] = cell;
    }
    return cell;
  }

 private:
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<EmbeddingVector> passage_vecs_;
  std::vector<EmbeddingVector> text_vecs_;
  std::unordered_map<std::string, EmbeddingVector> query_vecs_;
  std::vector<double> sim_;
};

struct AspectQuestions {
  // archetype id -> rendered questions, in template order
  std::vector<std::vector<ArchetypalQuestion>> per_archetype;
};

AspectQuestions questions_for(const Aspect& aspect, const std::vector<Archetype>& archetypes) {
  AspectQuestions out;
  for (const Archetype& q : archetypes) {
    auto qs = render_questions(q, aspect.surface.empty() ? aspect.key : aspect.surface);
    for (auto& question : qs) question.aspect = aspect.key;
    out.per_archetype.push_back(std::move(qs));
  }
  return out;
}

ExplanatoryIllocution illocution_from_table(const Aspect& aspect,
                                            const std::vector<Detail>& about,
                                            const std::vector<Archetype>& archetypes,
                                            const AspectQuestions& questions,
                                            const RunParams& params, ScoringTable& table) {
  ExplanatoryIllocution out;
  out.aspect = aspect.key;
  std::vector<std::size_t> rows;
  for (const Detail& d : about) rows.push_back(table.index(d.id));

  for (std::size_t qi = 0; qi < archetypes.size(); ++qi) {
    const auto& qs = questions.per_archetype[qi];
    std::vector<PertinenceScore> scored;
    scored.reserve(about.size());
    for (std::size_t k = 0; k < about.size(); ++k) {
      std::size_t best = 0;
      double best_p = -1.0;
      for (std::size_t j = 0; j < qs.size(); ++j) {
        const double p = table.pertinence(rows[k], qs[j].text);
        if (p > best_p) {
          best_p = p;
          best = j;
        }
      }
      scored.push_back({about[k].id, qs[best], best_p});
    }
    auto kept = greedy_dedup(std::move(scored), rows, params.dedup_threshold,
                             [&](std::size_t a, std::size_t b) { return table.similarity(a, b); });
    auto& contrib = out.contributing_details[archetypes[qi].id];
    for (const PertinenceScore& s : kept) {
      if (s.p >= params.pertinence_threshold) contrib.emplace_back(s.detail_id, s.p);
    }
    out.scores[archetypes[qi].id] = cumulative_pertinence(kept, params.pertinence_threshold);
  }
  return out;
}

void validate_archetypes(const std::vector<Archetype>& archetypes) {
  if (archetypes.empty()) throw ConfigError("archetype set Q is empty");
  for (const Archetype& a : archetypes) {
    try {
      validate_archetype(a);
    } catch (const SchemaError& e) {
      throw ConfigError(e.what());
    }
  }
}

}  // namespace

Aspect make_aspect(std::string_view phrase) {
  return {text::normalize_phrase(phrase), text::collapse_whitespace(phrase)};
}

void validate(const RunParams& params) {
  if (!(params.pertinence_threshold >= 0.0 && params.pertinence_threshold <= 1.0)) {
    throw ConfigError("pertinence threshold t must lie in [0, 1]");
  }
  if (!(params.dedup_threshold > 0.0 && params.dedup_threshold <= 1.0)) {
    throw ConfigError("dedup threshold r must lie in (0, 1]");
  }
  if (params.aspects.empty()) throw ConfigError("aspect set A is empty");
  for (const Aspect& a : params.aspects) {
    if (a.key.empty()) throw ConfigError("aspect \"" + a.surface + "\" normalizes to nothing");
  }
}

double DoXResult::r(std::string_view archetype_id) const {
  for (const ArchetypeScore& s : per_archetype) {
    if (s.id == archetype_id) return s.value;
  }
  throw std::out_of_range("no archetype " + std::string(archetype_id) + " in result");
}

std::vector<Detail> details_about(const KnowledgeGraph& graph, std::string_view aspect_key,
                                  MatchScope scope) {
  const std::vector<std::string> terms = text::split_terms(aspect_key);
  std::vector<Detail> out;
  for (const Detail& d : graph.edges) {
    if (matches(d, terms, scope)) out.push_back(d);
  }
  std::sort(out.begin(), out.end(), [](const Detail& a, const Detail& b) { return a.id < b.id; });
  return out;
}

std::vector<PertinenceScore> dedup(const std::vector<PertinenceScore>& scored,
                                   const std::vector<Detail>& details, double r,
                                   PertinenceEngine& engine) {
  std::unordered_map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < details.size(); ++i) pos.emplace(details[i].id, i);
  std::vector<std::size_t> index_of;
  for (const PertinenceScore& s : scored) {
    auto it = pos.find(s.detail_id);
    if (it == pos.end()) throw std::invalid_argument("dedup: unknown detail " + s.detail_id);
    index_of.push_back(it->second);
  }
  return greedy_dedup(scored, index_of, r, [&](std::size_t a, std::size_t b) {
    return engine.similarity(details[a], details[b]);
  });
}

double cumulative_pertinence(const std::vector<PertinenceScore>& kept, double t) {
  std::vector<PertinenceScore> ordered = kept;
  std::sort(ordered.begin(), ordered.end(), score_order);
  double total = 0.0;
  for (const PertinenceScore& s : ordered) {
    if (s.p >= t) total += s.p;
  }
  return total;
}

ExplanatoryIllocution explanatory_illocution(const KnowledgeGraph& graph, const Aspect& aspect,
                                             const std::vector<Archetype>& archetypes,
                                             const RunParams& params, PertinenceEngine& engine) {
  validate_archetypes(archetypes);
  const auto about = details_about(graph, aspect.key, params.match_scope);
  const auto questions = questions_for(aspect, archetypes);
  std::vector<const Detail*> ptrs;
  for (const Detail& d : about) ptrs.push_back(&d);
  std::vector<std::string> qtexts;
  for (const auto& qs : questions.per_archetype) {
    for (const auto& q : qs) qtexts.push_back(q.text);
  }
  ScoringTable table(ptrs, about.empty() ? std::vector<std::string>{} : qtexts, engine);
  return illocution_from_table(aspect, about, archetypes, questions, params, table);
}

DoXResult compute_dox(const KnowledgeGraph& graph, const RunParams& params,
                      const std::vector<Archetype>& archetypes, PertinenceEngine& engine) {
  validate(params);
  validate_archetypes(archetypes);

  DoXResult result;
  result.params = params;
  result.params.backend_id = engine.backend_id();
  result.detail_count = graph.edges.size();
  const std::set<std::string> known = known_aspects(graph);
  result.aspect_count = known.size();
  result.coverage = coverage(params.aspects, known);
  if (graph.edges.empty()) result.warnings.push_back("corpus produced no details; DoX is 0");

  // Gather everything that needs embedding so the backend sees few, large
  // batches.
  std::vector<std::vector<Detail>> about;
  std::vector<AspectQuestions> questions;
  std::vector<const Detail*> needed;
  std::set<std::string> needed_ids;
  std::vector<std::string> qtexts;
  about.reserve(params.aspects.size());
  for (const Aspect& a : params.aspects) {
    about.push_back(details_about(graph, a.key, params.match_scope));
    questions.push_back(questions_for(a, archetypes));
    if (about.back().empty()) continue;
    for (const Detail& d : about.back()) {
      if (needed_ids.insert(d.id).second) needed.push_back(&d);
    }
    for (const auto& qs : questions.back().per_archetype) {
      for (const auto& q : qs) qtexts.push_back(q.text);
    }
  }
  ScoringTable table(needed, qtexts, engine);

  for (std::size_t i = 0; i < params.aspects.size(); ++i) {
    result.per_aspect.push_back(illocution_from_table(params.aspects[i], about[i], archetypes,
                                                      questions[i], params, table));
  }

  std::vector<double> rs;
  double primary_sum = 0.0;
  double secondary_sum = 0.0;
  std::size_t primary_n = 0;
  std::size_t secondary_n = 0;
  for (const Archetype& q : archetypes) {
    std::vector<double> ps;
    for (const ExplanatoryIllocution& e : result.per_aspect) ps.push_back(e.scores.at(q.id));
    const double r = mean_over_aspects(ps);
    result.per_archetype.push_back({q.id, q.tier, r});
    rs.push_back(r);
    if (q.tier == Tier::kPrimary) {
      primary_sum += r;
      ++primary_n;
    } else {
      secondary_sum += r;
      ++secondary_n;
    }
  }
  result.average = mean_over_archetypes(rs);
  result.primary_average = primary_n ? primary_sum / static_cast<double>(primary_n) : 0.0;
  result.secondary_average = secondary_n ? secondary_sum / static_cast<double>(secondary_n) : 0.0;
  return result;
}

double coverage(const std::vector<Aspect>& aspects, const std::set<std::string>& known) {
  if (aspects.empty()) throw ConfigError("aspect set A is empty");
  std::vector<std::vector<std::string>> known_terms;
  known_terms.reserve(known.size());
  for (const std::string& k : known) known_terms.push_back(text::split_terms(k));
  std::size_t hit = 0;
  for (const Aspect& a : aspects) {
    const auto terms = text::split_terms(a.key);
    if (std::any_of(known_terms.begin(), known_terms.end(), [&](const auto& k) {
          return text::contains_sequence(k, terms);
        })) {
      ++hit;
    }
  }
  return static_cast<double>(hit) / static_cast<double>(aspects.size());
}

double mean_over_aspects(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  double total = 0.0;
  for (double v : values) total += v;
  return total / static_cast<double>(values.size());
}

double mean_over_archetypes(const std::vector<double>& values) {
  return mean_over_aspects(values);
}

}  // namespace dox
