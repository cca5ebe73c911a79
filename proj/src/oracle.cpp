#include "dox/oracle.hpp"

#include "dox/error.hpp"
#include "dox/text.hpp"

namespace dox {
namespace {

struct OracleDetail {
  Detail detail;  // id, text, context, triplet; no precomputed term vectors
  std::vector<std::string> subject_terms;
  std::vector<std::string> object_terms;
  std::vector<std::string> text_terms;
};

bool run_occurs(const std::vector<std::string>& hay, const std::vector<std::string>& needle) {
  if (needle.empty()) return false;
  for (std::size_t start = 0; start + needle.size() <= hay.size(); ++start) {
    bool all = true;
    for (std::size_t k = 0; k < needle.size(); ++k) {
      if (hay[start + k] != needle[k]) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

// (p desc, id asc) selection sort; quadratic on purpose.
void selection_sort(std::vector<std::pair<double, std::size_t>>& items,
                    const std::vector<OracleDetail>& details) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    std::size_t best = i;
    for (std::size_t j = i + 1; j < items.size(); ++j) {
      const auto& a = items[j];
      const auto& b = items[best];
      if (a.first > b.first ||
          (a.first == b.first && details[a.second].detail.id < details[b.second].detail.id)) {
        best = j;
      }
    }
    std::swap(items[i], items[best]);
  }
}

}  // namespace

DoXResult oracle_dox(const Corpus& corpus, const RunParams& params,
                     const std::vector<Archetype>& archetypes, PertinenceEngine& engine) {
  std::vector<TemplateTriplet> triplets;
  for (const Document& doc : corpus) {
    for (const Sentence& s : segment_sentences(doc)) {
      for (TemplateTriplet& t : extract_triplets(s)) triplets.push_back(std::move(t));
    }
  }
  return oracle_dox(triplets, params, archetypes, engine);
}

DoXResult oracle_dox(const std::vector<TemplateTriplet>& triplets, const RunParams& params,
                     const std::vector<Archetype>& archetypes, PertinenceEngine& engine) {
  if (params.aspects.empty()) throw ConfigError("aspect set A is empty");
  if (archetypes.empty()) throw ConfigError("archetype set Q is empty");
  if (params.aspects.size() > kOracleMaxAspects) throw SizeError("oracle: too many aspects");
  if (archetypes.size() > kOracleMaxArchetypes) throw SizeError("oracle: too many archetypes");

  // Exact-duplicate collapse by linear scan.
  std::vector<OracleDetail> details;
  std::vector<std::string> known;
  for (const TemplateTriplet& t : triplets) {
    for (auto& [key, forms] : harvest_aspects(t)) {
      bool present = false;
      for (const std::string& k : known) present = present || k == key;
      if (!present) known.push_back(key);
    }
    const std::string realized = realize(t);
    bool duplicate = false;
    for (const OracleDetail& d : details) {
      if (d.detail.text == realized && d.detail.context == t.context) duplicate = true;
    }
    if (duplicate) continue;
    OracleDetail od;
    od.detail.text = realized;
    od.detail.context = t.context;
    od.detail.id = detail_id(realized, t.context);
    od.detail.triplet = t;
    od.subject_terms = text::normalize_terms(t.subject);
    od.object_terms = text::normalize_terms(t.object);
    od.text_terms = text::normalize_terms(realized);
    details.push_back(std::move(od));
  }
  if (details.size() > kOracleMaxDetails) throw SizeError("oracle: too many details");

  DoXResult result;
  result.params = params;
  result.params.backend_id = engine.backend_id();
  result.detail_count = details.size();
  result.aspect_count = known.size();

  std::size_t covered = 0;
  for (const Aspect& a : params.aspects) {
    const auto needle = text::split_terms(a.key);
    bool hit = false;
    for (const std::string& k : known) hit = hit || run_occurs(text::split_terms(k), needle);
    if (hit) ++covered;
  }
  result.coverage = static_cast<double>(covered) / static_cast<double>(params.aspects.size());

  for (const Aspect& a : params.aspects) {
    const auto needle = text::split_terms(a.key);
    ExplanatoryIllocution ill;
    ill.aspect = a.key;
    for (const Archetype& q : archetypes) {
      auto questions = render_questions(q, a.surface.empty() ? a.key : a.surface);

      std::vector<std::pair<double, std::size_t>> scored;
      for (std::size_t i = 0; i < details.size(); ++i) {
        const OracleDetail& d = details[i];
        bool about = run_occurs(d.subject_terms, needle) || run_occurs(d.object_terms, needle);
        if (params.match_scope == MatchScope::kExtended) {
          about = about || run_occurs(d.text_terms, needle);
        }
        if (!about) continue;
        double p = -1.0;
        for (const ArchetypalQuestion& qa : questions) {
          const double pi = engine.pertinence(d.detail, qa).p;
          if (pi > p) p = pi;
        }
        scored.emplace_back(p, i);
      }
      selection_sort(scored, details);

      std::vector<std::pair<double, std::size_t>> kept;
      for (const auto& cand : scored) {
        bool keep = true;
        for (const auto& k : kept) {
          if (engine.similarity(details[cand.second].detail, details[k.second].detail) >
              params.dedup_threshold) {
            keep = false;
          }
        }
        if (keep) kept.push_back(cand);
      }

      double total = 0.0;
      auto& contrib = ill.contributing_details[q.id];
      for (const auto& k : kept) {
        if (k.first >= params.pertinence_threshold) {
          total += k.first;
          contrib.emplace_back(details[k.second].detail.id, k.first);
        }
      }
      ill.scores[q.id] = total;
    }
    result.per_aspect.push_back(std::move(ill));
  }

  double sum_all = 0.0;
  double sum_primary = 0.0;
  double sum_secondary = 0.0;
  double n_primary = 0.0;
  double n_secondary = 0.0;
  for (const Archetype& q : archetypes) {
    double sum = 0.0;
    for (const ExplanatoryIllocution& ill : result.per_aspect) sum += ill.scores.at(q.id);
    const double r = sum / static_cast<double>(params.aspects.size());
    result.per_archetype.push_back({q.id, q.tier, r});
    sum_all += r;
    if (q.tier == Tier::kPrimary) {
      sum_primary += r;
      n_primary += 1.0;
    } else {
      sum_secondary += r;
      n_secondary += 1.0;
    }
  }
  result.average = sum_all / static_cast<double>(archetypes.size());
  result.primary_average = n_primary > 0.0 ? sum_primary / n_primary : 0.0;
  result.secondary_average = n_secondary > 0.0 ? sum_secondary / n_secondary : 0.0;
  if (details.empty()) result.warnings.push_back("corpus produced no details; DoX is 0");
  return result;
}

}  // namespace dox
