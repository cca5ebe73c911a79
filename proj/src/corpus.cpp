#include "dox/corpus.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "dox/error.hpp"
#include "dox/text.hpp"

namespace dox {
namespace fs = std::filesystem;
namespace {

constexpr std::array<std::string_view, 12> kAbbreviations = {
    "dr", "mr", "mrs", "ms", "e.g", "i.e", "etc", "vs", "fig", "eq", "no", "st"};

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_abbreviation(std::string_view token) {
  while (!token.empty() && (token.front() == '(' || token.front() == '"' || token.front() == '\'')) {
    token.remove_prefix(1);
  }
  const std::string lower = text::to_lower(token);
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), lower) != kAbbreviations.end();
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IngestError("cannot read " + path.string());
  std::string data = ss.str();
  if (!text::is_valid_utf8(data)) throw IngestError("not valid UTF-8: " + path.string());
  return data;
}

void load_jsonl(const fs::path& path, const std::string& data, InputFormat format, Corpus& out) {
  std::istringstream lines(data);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw IngestError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (!rec.is_object() || !rec.contains("text") || !rec["text"].is_string()) {
      throw IngestError(path.string() + ":" + std::to_string(lineno) + ": missing string field \"text\"");
    }
    std::string body = rec["text"].get<std::string>();
    if (format == InputFormat::kMarkupStripped) body = strip_markup(body);
    std::string uri = rec.value("source_uri", path.string() + "#" + std::to_string(lineno));
    Document doc = make_document(std::move(uri), std::move(body));
    if (rec.contains("id") && rec["id"].is_string()) doc.id = rec["id"].get<std::string>();
    out.push_back(std::move(doc));
  }
}

}  // namespace

std::string strip_markup(std::string_view raw) {
  std::string untagged;
  untagged.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '<') {
      const std::size_t close = raw.find('>', i + 1);
      if (close != std::string_view::npos) {
        untagged.push_back(' ');
        i = close;
        continue;
      }
    }
    untagged.push_back(raw[i]);
  }

  static constexpr std::array<std::pair<std::string_view, char>, 5> kEntities = {{
      {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&apos;", '\''}, {"&amp;", '&'}}};
  std::string decoded;
  decoded.reserve(untagged.size());
  for (std::size_t i = 0; i < untagged.size(); ++i) {
    bool replaced = false;
    if (untagged[i] == '&') {
      for (const auto& [entity, ch] : kEntities) {
        if (std::string_view(untagged).substr(i, entity.size()) == entity) {
          decoded.push_back(ch);
          i += entity.size() - 1;
          replaced = true;
          break;
        }
      }
    }
    if (!replaced) decoded.push_back(untagged[i]);
  }
  return text::collapse_whitespace(decoded);
}

std::string document_id(std::string_view text) {
  return text::sha256_hex(text::collapse_whitespace(text)).substr(0, 16);
}

Document make_document(std::string source_uri, std::string text) {
  Document doc;
  doc.id = document_id(text);
  doc.source_uri = std::move(source_uri);
  doc.text = std::move(text);
  return doc;
}

Corpus load_corpus(const std::vector<fs::path>& paths, InputFormat format) {
  if (paths.empty()) throw ConfigError("no corpus paths given");

  std::vector<fs::path> files;
  for (const fs::path& p : paths) {
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      for (const auto& entry : fs::recursive_directory_iterator(p, ec)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
      }
      if (ec) throw IngestError("cannot list " + p.string() + ": " + ec.message());
    } else if (fs::is_regular_file(p, ec)) {
      files.push_back(p);
    } else {
      throw IngestError("cannot read " + p.string());
    }
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });

  Corpus corpus;
  for (const fs::path& file : files) {
    std::string data = read_file(file);
    if (file.extension() == ".jsonl") {
      load_jsonl(file, data, format, corpus);
      continue;
    }
    if (format == InputFormat::kMarkupStripped) data = strip_markup(data);
    corpus.push_back(make_document(file.generic_string(), std::move(data)));
  }
  return corpus;
}

std::vector<Sentence> segment_sentences(const Document& doc) {
  const std::string& s = doc.text;
  std::vector<Sentence> out;
  auto emit = [&](std::size_t b, std::size_t e) {
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    if (e > b) out.push_back({doc.id, out.size(), s.substr(b, e - b), b, e});
  };

  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c != '.' && c != '!' && c != '?') continue;
    // Closing quotes and brackets stay with the sentence they end.
    std::size_t end = i + 1;
    while (end < s.size() && (s[end] == '"' || s[end] == '\'' || s[end] == ')')) ++end;
    std::size_t next = end;
    while (next < s.size() && is_space(s[next])) ++next;
    if (next == end || next >= s.size()) continue;
    if (!std::isupper(static_cast<unsigned char>(s[next]))) continue;
    if (c == '.') {
      std::size_t tb = i;
      while (tb > start && !is_space(s[tb - 1])) --tb;
      if (is_abbreviation(std::string_view(s).substr(tb, i - tb))) continue;
    }
    emit(start, end);
    start = end;
    i = end - 1;
  }
  emit(start, s.size());
  return out;
}

}  // namespace dox
