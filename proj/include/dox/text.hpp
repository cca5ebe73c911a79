#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dox::text {

enum class TokenKind { kWord, kPunct };

struct Token {
  std::string text;
  std::size_t begin = 0;  // byte offsets into the tokenized string
  std::size_t end = 0;
  TokenKind kind = TokenKind::kWord;

  bool is_word() const { return kind == TokenKind::kWord; }
};

// Words are runs of alphanumerics (bytes >= 0x80 count as letters) with
// internal apostrophes, hyphens or periods; every other non-space byte is a
// one-character punctuation token.
std::vector<Token> tokenize(std::string_view s);

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
std::string collapse_whitespace(std::string_view s);
bool is_valid_utf8(std::string_view s);

// Suffix-stripping lemmatizer: -ies -> y, -(s|x|z|ch|sh)es, -s, -ing, -ed
// with doubled-consonant undoubling. Input must already be lowercase.
std::string stem(std::string_view word);

bool is_determiner(std::string_view lower_word);
bool is_stopword(std::string_view lower_word);
bool is_verb(std::string_view lower_word);           // closed verb/auxiliary list
bool is_verb_modifier(std::string_view lower_word);  // negations, adverbs absorbed by a verb group
bool is_subordinator(std::string_view lower_word);
bool is_clause_conjunction(std::string_view lower_word);
bool is_preposition(std::string_view lower_word);
// Words that may sit inside a noun chunk: not a stopword, not an unambiguous
// verb form, not an -ly adverb. Noun/verb homographs ("damage", "use") pass.
bool is_content_word(std::string_view lower_word);

// Lowercased, determiner-free, stemmed word tokens of a phrase.
std::vector<std::string> normalize_terms(std::string_view phrase);
// normalize_terms joined by single spaces.
std::string normalize_phrase(std::string_view phrase);

// True iff needle occurs as a contiguous run inside haystack. An empty
// needle never matches.
bool contains_sequence(std::span<const std::string> haystack,
                       std::span<const std::string> needle);

std::vector<std::string> split_terms(std::string_view normalized);

std::string sha256_hex(std::string_view data);
std::uint64_t fnv1a64(std::string_view data);

}  // namespace dox::text
