#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace dox {

struct Document {
  std::string id;  // first 16 hex chars of sha256(whitespace-collapsed text)
  std::string source_uri;
  std::string text;
};

struct Sentence {
  std::string doc_id;
  std::size_t index = 0;
  std::string text;
  std::size_t begin = 0;  // byte span into Document::text
  std::size_t end = 0;
};

using Corpus = std::vector<Document>;

enum class InputFormat { kPlain, kMarkupStripped };

// Deletes <...> runs, decodes the five XML entities, collapses whitespace.
std::string strip_markup(std::string_view raw);

std::string document_id(std::string_view text);

Document make_document(std::string source_uri, std::string text);

// Files (and the regular files under directories, recursively) are loaded in
// lexicographic path order. Files ending in ".jsonl" are read as one
// {"id"?, "source_uri", "text"} record per line.
// Throws ConfigError on an empty path list and IngestError naming the path
// for unreadable or non-UTF-8 input.
Corpus load_corpus(const std::vector<std::filesystem::path>& paths,
                   InputFormat format = InputFormat::kPlain);

std::vector<Sentence> segment_sentences(const Document& doc);

}  // namespace dox
