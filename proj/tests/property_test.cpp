#include <gtest/gtest.h>

#include "properties.hpp"

namespace dox::testing {
namespace {

constexpr int kCases = 40;

TEST(Property, DuplicateCorpusInvariance) {
  for (int i = 0; i < kCases; ++i) {
    const auto f = check_duplicate_invariance(1000 + i);
    EXPECT_FALSE(f.has_value()) << "seed " << 1000 + i << ": " << f.value_or("");
  }
}

TEST(Property, UnrelatedDocumentInvariance) {
  for (int i = 0; i < kCases; ++i) {
    const auto f = check_unrelated_invariance(2000 + i);
    EXPECT_FALSE(f.has_value()) << "seed " << 2000 + i << ": " << f.value_or("");
  }
}

TEST(Property, ThresholdMonotonicity) {
  for (int i = 0; i < kCases; ++i) {
    const auto f = check_threshold_monotonicity(3000 + i);
    EXPECT_FALSE(f.has_value()) << "seed " << 3000 + i << ": " << f.value_or("");
  }
}

TEST(Property, AdditiveMonotonicity) {
  int checked = 0;
  for (int i = 0; i < 4 * kCases && checked < kCases; ++i) {
    bool skipped = false;
    const auto f = check_additive_monotonicity(4000 + i, skipped);
    EXPECT_FALSE(f.has_value()) << "seed " << 4000 + i << ": " << f.value_or("");
    checked += skipped ? 0 : 1;
  }
  EXPECT_EQ(checked, kCases);
}

TEST(Property, PermutationInvariance) {
  for (int i = 0; i < kCases; ++i) {
    const auto f = check_permutation_invariance(5000 + i);
    EXPECT_FALSE(f.has_value()) << "seed " << 5000 + i << ": " << f.value_or("");
  }
}

TEST(Property, ZeroLaw) {
  CorpusGenerator gen(6000);
  for (int i = 0; i < kCases; ++i) {
    Corpus c;
    c.push_back(make_document("gen://u", gen.document(gen.uniform(1, 5),
                                                      CorpusGenerator::unrelated_nouns())));
    const DoXResult r = run(c, default_params(gen.aspects()));
    for (const auto& s : r.per_archetype) ASSERT_EQ(s.value, 0.0);
    ASSERT_EQ(r.average, 0.0);
  }
}

TEST(Property, ScaleLaw) {
  CorpusGenerator gen(7000);
  for (int i = 0; i < kCases; ++i) {
    const Corpus c = gen.corpus();
    auto aspects = gen.aspects(4);
    const DoXResult once = run(c, default_params(aspects));
    const auto copy = aspects;
    aspects.insert(aspects.end(), copy.begin(), copy.end());
    const DoXResult twice = run(c, default_params(aspects));
    // per_aspect legitimately doubles; compare the archetype scores only.
    for (std::size_t k = 0; k < once.per_archetype.size(); ++k) {
      EXPECT_NEAR(once.per_archetype[k].value, twice.per_archetype[k].value,
                  1e-12 * (1 + once.per_archetype[k].value))
          << "seed index " << i;
    }
  }
}

}  // namespace
}  // namespace dox::testing
