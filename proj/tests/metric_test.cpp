#include <gtest/gtest.h>

#include "dox/error.hpp"
#include "dox/metric.hpp"
#include "test_support.hpp"

namespace dox {
namespace {

using testing::ScriptedBackend;

TemplateTriplet triplet(std::string s, std::string t, std::string o, std::string ctx) {
  return TemplateTriplet{std::move(s), std::move(t), std::move(o), "doc", 0, std::move(ctx)};
}

PertinenceScore score(std::string id, double p) { return {std::move(id), {}, p}; }

Archetype single(std::string id, std::string tmpl, Tier tier = Tier::kPrimary) {
  return Archetype{id, tier, id, {std::move(tmpl)}};
}

RunParams params_for(std::vector<Aspect> aspects, double t = 0.15, double r = 0.97) {
  RunParams p;
  p.aspects = std::move(aspects);
  p.pertinence_threshold = t;
  p.dedup_threshold = r;
  return p;
}

TEST(Cumulative, SumsKeptScoresAtOrAboveThreshold) {
  EXPECT_DOUBLE_EQ(cumulative_pertinence({}, 0.15), 0.0);
  EXPECT_DOUBLE_EQ(
      cumulative_pertinence({score("a", 0.5), score("b", 0.3), score("c", 0.1)}, 0.15), 0.8);
  EXPECT_EQ(cumulative_pertinence({score("a", 0.15)}, 0.15), 0.15);
  EXPECT_EQ(cumulative_pertinence({score("a", 0.1), score("b", 0.14)}, 0.15), 0.0);
}

TEST(Means, SpotChecks) {
  EXPECT_DOUBLE_EQ(mean_over_aspects({0.8, 0.0}), 0.4);
  EXPECT_DOUBLE_EQ(mean_over_archetypes({0.4, 0.2}), 0.3);
}

TEST(Coverage, Ratios) {
  const std::set<std::string> known = {"heart disease", "angina pectoris", "oxygen"};
  EXPECT_DOUBLE_EQ(coverage(testing::aspects_of({"heart", "oxygen"}), known), 1.0);
  EXPECT_DOUBLE_EQ(coverage(testing::aspects_of({"stroke"}), known), 0.0);
  EXPECT_DOUBLE_EQ(coverage(testing::aspects_of({"heart", "angina", "stroke", "vessel"}), known),
                   0.5);
  EXPECT_DOUBLE_EQ(coverage(testing::aspects_of({"heartburn"}), known), 0.0);
  EXPECT_THROW(coverage({}, known), ConfigError);
}

TEST(DetailsAbout, TokenBoundaryMatching) {
  const KnowledgeGraph g =
      build_graph({triplet("heart disease", "{subj} kills {obj}", "people", "c1"),
                   triplet("heartburn", "{subj} annoys {obj}", "people", "c2")});
  const auto about = details_about(g, "heart");
  ASSERT_EQ(about.size(), 1u);
  EXPECT_EQ(about[0].triplet.subject, "heart disease");
}

TEST(DetailsAbout, MatchScope) {
  const std::string s = "angina happens when some part of your heart does not get enough oxygen";
  const KnowledgeGraph g = build_graph(extract_triplets(Sentence{"d", 0, s, 0, s.size()}));
  EXPECT_EQ(details_about(g, "heart", MatchScope::kExtended).size(), 1u);
  EXPECT_TRUE(details_about(g, "heart", MatchScope::kSubjectObject).empty());
  EXPECT_EQ(details_about(g, "angina", MatchScope::kSubjectObject).size(), 1u);
  EXPECT_TRUE(details_about(g, "stroke").empty());
}

TEST(DetailsAbout, SortedById) {
  testing::CorpusGenerator gen(17);
  const KnowledgeGraph g = build_graph(extract_corpus(gen.corpus(30)));
  const auto about = details_about(g, "heart");
  for (std::size_t i = 1; i < about.size(); ++i) EXPECT_LT(about[i - 1].id, about[i].id);
}

TEST(Dedup, IdenticalTextsKeepOne) {
  auto engine = testing::lexical_engine();
  const Detail a = make_detail(triplet("angina", "{subj} is {obj}", "pain", "c1"));
  const Detail b = make_detail(triplet("angina", "{subj} is {obj}", "pain", "c2"));
  ASSERT_NE(a.id, b.id);
  const auto kept = dedup({score(a.id, 0.8), score(b.id, 0.8)}, {a, b}, 0.97, engine);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].detail_id, std::min(a.id, b.id));
}

TEST(Dedup, NearDuplicateLosesToHigherScore) {
  auto engine = testing::lexical_engine();
  const Detail a =
      make_detail(triplet("P", "{subj} is {obj}", "the probability of having a heart disease", "x"));
  const Detail b = make_detail(
      triplet("the score P", "{subj} is {obj}", "the probability of having a disease", "x"));
  const double sim = engine.similarity(a, b);
  ASSERT_GT(sim, 0.5);
  const auto kept = dedup({score(b.id, 0.4), score(a.id, 0.7)}, {a, b}, sim - 1e-6, engine);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].detail_id, a.id);
  EXPECT_EQ(dedup({score(b.id, 0.4), score(a.id, 0.7)}, {a, b}, sim, engine).size(), 2u);
}

TEST(Dedup, OrthogonalDetailsBothKept) {
  const Detail a = make_detail(triplet("a", "{subj} x {obj}", "b", "c"));
  const Detail b = make_detail(triplet("d", "{subj} y {obj}", "e", "f"));
  PertinenceEngine engine(std::make_shared<ScriptedBackend>(
      std::map<std::string, std::vector<double>>{{a.text, {1, 0}}, {b.text, {0, 1}}}));
  const auto kept = dedup({score(a.id, 0.3), score(b.id, 0.6)}, {a, b}, 0.97, engine);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].detail_id, b.id);
}

TEST(ComputeDox, SingleDetailSingleArchetype) {
  const auto t = triplet("angina", "{subj} is {obj}", "pain", "Angina is pain.");
  const Detail d = make_detail(t);
  PertinenceEngine engine(std::make_shared<ScriptedBackend>(std::map<std::string, std::vector<double>>{
      {"What is angina?", {1, 0}}, {passage_text(d), {0.6, 0.8}}}));
  const auto result = compute_dox(build_graph({t}), params_for(testing::aspects_of({"angina"})),
                                  {single("what", "What is {aspect}?")}, engine);
  ASSERT_EQ(result.per_archetype.size(), 1u);
  EXPECT_NEAR(result.r("what"), 0.6, 1e-12);
  EXPECT_NEAR(result.average, 0.6, 1e-12);
  EXPECT_EQ(result.coverage, 1.0);
  EXPECT_EQ(result.params.backend_id, "scripted");
}

TEST(ComputeDox, AveragesOverAspectsAndArchetypes) {
  const auto t = triplet("angina", "{subj} is {obj}", "pain", "Angina is pain.");
  const Detail d = make_detail(t);
  PertinenceEngine engine(std::make_shared<ScriptedBackend>(std::map<std::string, std::vector<double>>{
      {"What is angina?", {1, 0}},
      {"Why angina?", {0.8, 0.6}},
      {passage_text(d), {1, 0}}}));
  const std::vector<Archetype> q = {single("what", "What is {aspect}?"),
                                    single("why", "Why {aspect}?", Tier::kSecondary)};
  const auto result =
      compute_dox(build_graph({t}), params_for(testing::aspects_of({"angina", "stroke"})), q, engine);
  EXPECT_NEAR(result.r("what"), 0.5, 1e-12);
  EXPECT_NEAR(result.r("why"), 0.4, 1e-12);
  EXPECT_NEAR(result.average, 0.45, 1e-12);
  EXPECT_NEAR(result.primary_average, 0.5, 1e-12);
  EXPECT_NEAR(result.secondary_average, 0.4, 1e-12);
  EXPECT_DOUBLE_EQ(result.coverage, 0.5);
  ASSERT_EQ(result.per_aspect.size(), 2u);
  EXPECT_EQ(result.per_aspect[1].scores.at("what"), 0.0);
  ASSERT_EQ(result.per_aspect[0].contributing_details.at("what").size(), 1u);
  EXPECT_EQ(result.per_aspect[0].contributing_details.at("what")[0].first, d.id);
}

TEST(ComputeDox, ZeroExample) {
  auto engine = testing::lexical_engine();
  const Corpus c = testing::corpus_of(
      {"I am happy that my article has been accepted in this prestigious journal"});
  const auto result = compute_dox(build_graph(extract_corpus(c)),
                                  params_for(testing::heart_aspects()), default_archetypes(), engine);
  ASSERT_EQ(result.per_archetype.size(), 25u);
  for (const auto& s : result.per_archetype) EXPECT_EQ(s.value, 0.0) << s.id;
  EXPECT_EQ(result.average, 0.0);
  EXPECT_EQ(result.coverage, 0.0);
}

TEST(ComputeDox, EmptyCorpusWarns) {
  auto engine = testing::lexical_engine();
  const auto result = compute_dox(build_graph({}), params_for(testing::heart_aspects()),
                                  default_archetypes(), engine);
  EXPECT_EQ(result.average, 0.0);
  EXPECT_EQ(result.coverage, 0.0);
  EXPECT_FALSE(result.warnings.empty());
}

TEST(ComputeDox, ConfigurationErrors) {
  auto engine = testing::lexical_engine();
  EXPECT_THROW(compute_dox(build_graph({}), params_for({}), default_archetypes(), engine),
               ConfigError);
  EXPECT_THROW(compute_dox(build_graph({}), params_for(testing::heart_aspects()), {}, engine),
               ConfigError);
  EXPECT_THROW(validate(params_for(testing::heart_aspects(), 1.5)), ConfigError);
  EXPECT_THROW(validate(params_for(testing::heart_aspects(), 0.1, 0.0)), ConfigError);
  EXPECT_NO_THROW(validate(params_for(testing::heart_aspects(), 0.0, 1.0)));
}

TEST(Illocution, OneScorePerArchetype) {
  auto engine = testing::lexical_engine();
  const auto e = explanatory_illocution(build_graph({}), make_aspect("angina"), default_archetypes(),
                                        params_for(testing::aspects_of({"angina"})), engine);
  EXPECT_EQ(e.scores.size(), 25u);
  for (const auto& [id, p] : e.scores) EXPECT_EQ(p, 0.0);
}

}  // namespace
}  // namespace dox
