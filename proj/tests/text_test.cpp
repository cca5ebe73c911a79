#include <gtest/gtest.h>

#include "dox/text.hpp"

namespace dox::text {
namespace {

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  for (const Token& t : tokenize(s)) out.push_back(t.text);
  return out;
}

TEST(Tokenize, KeepsInternalPunctuationInsideWords) {
  EXPECT_EQ(words("don't e.g. well-known 3.5"),
            (std::vector<std::string>{"don't", "e.g", ".", "well-known", "3.5"}));
}

TEST(Tokenize, RecordsByteOffsets) {
  const std::string s = "  Angina, heart.";
  auto toks = tokenize(s);
  ASSERT_EQ(toks.size(), 4u);
  EXPECT_EQ(s.substr(toks[0].begin, toks[0].end - toks[0].begin), "Angina");
  EXPECT_FALSE(toks[1].is_word());
  EXPECT_EQ(toks[3].text, ".");
}

TEST(Stem, SuffixRules) {
  EXPECT_EQ(stem("diseases"), "disease");
  EXPECT_EQ(stem("arteries"), "artery");
  EXPECT_EQ(stem("classes"), "class");
  EXPECT_EQ(stem("boxes"), "box");
  EXPECT_EQ(stem("causes"), "cause");
  EXPECT_EQ(stem("buzzes"), "buzz");
  EXPECT_EQ(stem("churches"), "church");
  EXPECT_EQ(stem("vessels"), "vessel");
  EXPECT_EQ(stem("stress"), "stress");
  EXPECT_EQ(stem("angina"), "angina");
  EXPECT_EQ(stem("virus"), "virus");
  EXPECT_EQ(stem("running"), "run");
  EXPECT_EQ(stem("stopped"), "stop");
  EXPECT_EQ(stem("falling"), "fall");
  EXPECT_EQ(stem("red"), "red");
}

TEST(Normalize, DropsDeterminersAndStems) {
  EXPECT_EQ(normalize_phrase("The Heart Diseases"), "heart disease");
  EXPECT_EQ(normalize_phrase("your heart"), "heart");
  EXPECT_EQ(normalize_phrase("  "), "");
}

TEST(ContainsSequence, RespectsTokenBoundaries) {
  const std::vector<std::string> hay = {"heart", "disease"};
  const std::vector<std::string> heart = {"heart"};
  const std::vector<std::string> burn = {"heartburn"};
  const std::vector<std::string> both = {"heart", "disease"};
  const std::vector<std::string> rev = {"disease", "heart"};
  EXPECT_TRUE(contains_sequence(hay, heart));
  EXPECT_TRUE(contains_sequence(hay, both));
  EXPECT_FALSE(contains_sequence(hay, rev));
  EXPECT_FALSE(contains_sequence(std::vector<std::string>{"heartburn"}, heart));
  EXPECT_FALSE(contains_sequence(hay, burn));
  EXPECT_FALSE(contains_sequence(hay, std::vector<std::string>{}));
}

TEST(Utf8, Validation) {
  EXPECT_TRUE(is_valid_utf8("plain ascii"));
  EXPECT_TRUE(is_valid_utf8("caf\xc3\xa9"));
  EXPECT_TRUE(is_valid_utf8("\xe2\x82\xac"));
  EXPECT_FALSE(is_valid_utf8("\xc3"));
  EXPECT_FALSE(is_valid_utf8("\xff\xfe"));
  EXPECT_FALSE(is_valid_utf8("\xe2\x82"));
}

TEST(Hashing, KnownDigests) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(fnv1a64(""), 14695981039346656037ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Whitespace, CollapseAndTrim) {
  EXPECT_EQ(collapse_whitespace("  a \n\t b  "), "a b");
  EXPECT_EQ(trim("\n x y \t"), "x y");
}

TEST(Lexicon, ContentWords) {
  EXPECT_TRUE(is_content_word("heart"));
  EXPECT_TRUE(is_content_word("damage"));
  EXPECT_FALSE(is_content_word("the"));
  EXPECT_FALSE(is_content_word("quickly"));
  EXPECT_FALSE(is_content_word("happens"));
}

}  // namespace
}  // namespace dox::text
