#include "dox/text.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>
#include <unordered_set>

namespace dox::text {
namespace {

using WordSet = std::unordered_set<std::string_view>;

bool is_alnum_byte(unsigned char c) {
  return std::isalnum(c) || c >= 0x80;
}

bool is_space_byte(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

const WordSet& determiners() {
  static const WordSet kSet = {"a", "an", "the", "this", "that", "his", "her", "your", "its"};
  return kSet;
}

const WordSet& prepositions() {
  static const WordSet kSet = {
      "in",     "on",     "at",     "by",      "for",    "with",    "about",  "against",
      "between", "into",  "through", "during", "before", "after",   "above",  "below",
      "to",     "from",   "up",     "down",    "of",     "off",     "over",   "under",
      "within", "without", "among", "per",     "via",    "across",  "along",  "around",
      "behind", "beyond", "despite", "toward", "towards", "upon",   "like",   "near",
      "than",   "since",  "until",  "unless"};
  return kSet;
}

const WordSet& subordinators() {
  static const WordSet kSet = {"when",  "because", "while",  "although", "though", "if",
                               "since", "until",   "unless", "whereas",  "once",   "after",
                               "before", "where",  "whenever", "as"};
  return kSet;
}

const WordSet& clause_conjunctions() {
  static const WordSet kSet = {"and", "but", "or", "because", "when", "while", "although",
                               "that", "which", "who"};
  return kSet;
}

// Auxiliaries and irregular forms are listed verbatim; regular verbs are
// listed by base form and matched through stem().
const WordSet& verb_forms() {
  static const WordSet kSet = {
      "be", "am", "is", "are", "was", "were", "been", "being", "'s", "'re", "'m",
      "have", "has", "had", "having", "do", "does", "did", "done", "doing",
      "can", "could", "will", "would", "shall", "should", "may", "might", "must", "ought",
      "became", "began", "begun", "brought", "built", "bought", "came", "caught", "chose",
      "chosen", "dealt", "drew", "drawn", "drove", "driven", "ate", "eaten", "fell",
      "fallen", "felt", "fought", "found", "flew", "flown", "forgot", "forgotten", "gave",
      "given", "goes", "went", "gone", "got", "gotten", "grew", "grown", "held", "hid",
      "kept", "knew", "known", "laid", "led", "left", "lent", "lost", "made", "meant",
      "met", "paid", "ran", "rose", "risen", "said", "saw", "seen", "sent", "shown",
      "sold", "sought", "spent", "stood", "struck", "taught", "told", "thought", "took",
      "taken", "understood", "won", "wrote", "written", "worn", "arose", "arisen",
      "spoke", "spoken", "became"};
  return kSet;
}

const WordSet& verb_bases() {
  static const WordSet kSet = {
      "accept", "achieve", "acquire", "affect", "allow", "appear", "apply", "approve",
      "argue", "arise", "ask", "assess", "assign", "avoid", "become", "begin", "believe",
      "belong", "block", "bring", "build", "buy", "calculate", "call", "carry", "catch",
      "cause", "change", "choose", "classify", "come", "compare", "compute", "consider",
      "consist", "contain", "continue", "contribute", "create", "damage", "deal",
      "decide", "decrease", "define", "deliver", "deny", "depend", "describe", "detect",
      "determine", "develop", "die", "differ", "display", "drive", "eat", "enable",
      "ensure", "estimate", "evaluate", "exceed", "exist", "expect", "experience",
      "explain", "fail", "fall", "feel", "fight", "find", "flow", "follow", "forget",
      "get", "give", "go", "grow", "happen", "harm", "help", "hide", "hold", "hurt",
      "identify", "improve", "include", "increase", "indicate", "influence", "involve",
      "keep", "know", "lack", "lead", "learn", "leave", "let", "live", "look", "lose",
      "lower", "make", "mean", "measure", "meet", "narrow", "need", "obtain", "occur",
      "offer", "pay", "perform", "predict", "prevent", "produce", "provide", "pump",
      "put", "raise", "reach", "receive", "recommend", "reduce", "reflect", "reject",
      "relate", "remain", "remove", "repay", "replace", "represent", "require", "return",
      "rise", "run", "say", "see", "seem", "sell", "send", "show", "sit", "speak",
      "spend", "stand", "start", "stay", "stop", "suffer", "suggest", "supply", "support",
      "take", "teach", "tell", "tend", "think", "treat", "trigger", "try", "turn",
      "understand", "use", "vary", "want", "weaken", "weigh", "win", "work", "worsen",
      "write"};
  return kSet;
}

const WordSet& noun_verb_homographs() {
  static const WordSet kSet = {
      "damage", "change", "use", "work", "help", "increase", "decrease", "return", "supply",
      "support", "experience", "measure", "flow", "block", "lack", "display", "pump",
      "influence", "drive", "report", "need", "offer", "rise", "fall", "run", "stop",
      "start", "turn", "set", "hold", "lead", "pay", "treat", "trigger", "estimate",
      "call", "look", "show", "deal", "harm", "cause", "weigh", "approve"};
  return kSet;
}

const WordSet& verb_modifiers() {
  static const WordSet kSet = {
      "not", "never", "n't", "also", "only", "just", "still", "often", "usually", "always",
      "enough", "really", "even", "already", "generally", "typically", "directly", "mainly",
      "mostly", "sometimes", "rarely", "frequently", "commonly", "then", "further", "again",
      "actually", "easily", "quickly", "slowly", "greatly", "strongly", "highly"};
  return kSet;
}

const WordSet& other_stopwords() {
  static const WordSet kSet = {
      "i", "me", "my", "mine", "we", "us", "our", "you", "yours", "he", "him", "she", "it",
      "they", "them", "their", "these", "those", "some", "any", "each", "every", "all",
      "both", "no", "nor", "and", "or", "but", "so", "as", "such", "very", "more", "most",
      "much", "many", "few", "other", "own", "same", "there", "here", "what", "which",
      "who", "whom", "whose", "why", "how", "where", "when", "too", "whether", "because",
      "while", "although", "though", "if", "whereas", "once", "whenever", "yes", "one"};
  return kSet;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool has_vowel(std::string_view s) {
  return s.find_first_of("aeiouy") != std::string_view::npos;
}

bool is_consonant(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) &&
         std::string_view("aeiou").find(c) == std::string_view::npos;
}

std::string undouble(std::string s) {
  const std::size_t n = s.size();
  if (n >= 2 && s[n - 1] == s[n - 2] && is_consonant(s[n - 1]) && s[n - 1] != 'l' &&
      s[n - 1] != 's' && s[n - 1] != 'z') {
    s.pop_back();
  }
  return s;
}

}  // namespace

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = s.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (is_space_byte(c)) {
      ++i;
      continue;
    }
    if (is_alnum_byte(c)) {
      std::size_t j = i + 1;
      while (j < n) {
        const auto cj = static_cast<unsigned char>(s[j]);
        if (is_alnum_byte(cj)) {
          ++j;
        } else if ((cj == '\'' || cj == '-' || cj == '.') && j + 1 < n &&
                   is_alnum_byte(static_cast<unsigned char>(s[j + 1]))) {
          j += 2;
        } else {
          break;
        }
      }
      tokens.push_back({std::string(s.substr(i, j - i)), i, j, TokenKind::kWord});
      i = j;
    } else {
      tokens.push_back({std::string(1, s[i]), i, i + 1, TokenKind::kPunct});
      ++i;
    }
  }
  return tokens;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
  });
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space_byte(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && is_space_byte(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space_byte(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    }
  }
  return out;
}

bool is_valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t extra = 0;
    if (c < 0x80) {
      extra = 0;
    } else if ((c & 0xE0) == 0xC0 && c >= 0xC2) {
      extra = 1;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
    } else if ((c & 0xF8) == 0xF0 && c <= 0xF4) {
      extra = 3;
    } else {
      return false;
    }
    if (i + extra >= s.size() && extra > 0) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return false;
    }
    i += extra + 1;
  }
  return true;
}

std::string stem(std::string_view word) {
  std::string w(word);
  if (w.size() <= 3) return w;
  if (ends_with(w, "ies") && w.size() > 4) {
    return w.substr(0, w.size() - 3) + "y";
  }
  if (ends_with(w, "sses")) {
    return w.substr(0, w.size() - 2);
  }
  if (ends_with(w, "es")) {
    // "-ses" keeps its e ("diseases" -> "disease") so plurals meet their
    // singular; only the sibilant clusters take the full "-es".
    std::string_view base(w.data(), w.size() - 2);
    if (ends_with(base, "x") || ends_with(base, "zz") || ends_with(base, "ch") ||
        ends_with(base, "sh")) {
      return std::string(base);
    }
  }
  if (ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") && !ends_with(w, "is")) {
    return w.substr(0, w.size() - 1);
  }
  if (ends_with(w, "ing") && w.size() >= 6 && has_vowel(std::string_view(w).substr(0, w.size() - 3))) {
    return undouble(w.substr(0, w.size() - 3));
  }
  if (ends_with(w, "ed") && w.size() >= 5 && has_vowel(std::string_view(w).substr(0, w.size() - 2))) {
    return undouble(w.substr(0, w.size() - 2));
  }
  return w;
}

bool is_determiner(std::string_view w) { return determiners().contains(w); }

bool is_preposition(std::string_view w) { return prepositions().contains(w); }

bool is_subordinator(std::string_view w) { return subordinators().contains(w); }

bool is_clause_conjunction(std::string_view w) { return clause_conjunctions().contains(w); }

bool is_verb_modifier(std::string_view w) { return verb_modifiers().contains(w); }

bool is_stopword(std::string_view w) {
  return determiners().contains(w) || prepositions().contains(w) ||
         other_stopwords().contains(w) || verb_modifiers().contains(w) ||
         verb_forms().contains(w);
}

bool is_verb(std::string_view w) {
  if (verb_forms().contains(w) || verb_bases().contains(w)) return true;
  if (ends_with(w, "s") || ends_with(w, "ed") || ends_with(w, "ing")) {
    const std::string base = stem(w);
    if (base != w && (verb_bases().contains(base) || verb_bases().contains(base + "e"))) {
      return true;
    }
  }
  return false;
}

bool is_content_word(std::string_view w) {
  if (w.empty() || is_stopword(w)) return false;
  if (w.size() > 4 && ends_with(w, "ly")) return false;
  if (!is_verb(w)) return true;
  if (noun_verb_homographs().contains(w)) return true;
  return ends_with(w, "s") && noun_verb_homographs().contains(stem(w));
}

std::vector<std::string> normalize_terms(std::string_view phrase) {
  std::vector<std::string> terms;
  for (const Token& tok : tokenize(phrase)) {
    if (!tok.is_word()) continue;
    std::string lower = to_lower(tok.text);
    if (is_determiner(lower)) continue;
    terms.push_back(stem(lower));
  }
  return terms;
}

std::string normalize_phrase(std::string_view phrase) {
  std::string out;
  for (const std::string& term : normalize_terms(phrase)) {
    if (!out.empty()) out.push_back(' ');
    out += term;
  }
  return out;
}

bool contains_sequence(std::span<const std::string> haystack,
                       std::span<const std::string> needle) {
  if (needle.empty() || needle.size() > haystack.size()) return false;
  return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) !=
         haystack.end();
}

std::vector<std::string> split_terms(std::string_view normalized) {
  std::vector<std::string> terms;
  std::size_t i = 0;
  while (i < normalized.size()) {
    while (i < normalized.size() && normalized[i] == ' ') ++i;
    std::size_t j = i;
    while (j < normalized.size() && normalized[j] != ' ') ++j;
    if (j > i) terms.emplace_back(normalized.substr(i, j - i));
    i = j;
  }
  return terms;
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0x0F]);
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace dox::text
