#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dox/archetypes.hpp"
#include "dox/embedding.hpp"
#include "dox/extraction.hpp"

namespace dox {

struct PertinenceScore {
  std::string detail_id;
  ArchetypalQuestion question;
  double p = 0.0;  // in [0, 1]
};

inline constexpr std::size_t kMaxPassageTokens = 384;

// d + ". " + z, cut to the first kMaxPassageTokens whitespace tokens.
std::string passage_text(const Detail& detail);

struct EngineOptions {
  std::size_t jobs = 1;  // concurrent backend batches
  bool use_cache = true;
};

// Scores details against questions through an embedding backend. Vectors
// are keyed by input text, so concurrent batches may complete in any order.
class PertinenceEngine {
 public:
  PertinenceEngine(std::shared_ptr<EmbeddingBackend> backend, EngineOptions options = {},
                   std::shared_ptr<EmbeddingCache> cache = nullptr);

  std::vector<EmbeddingVector> embed(std::span<const std::string> texts, Role role);

  // p = clamp(cosine(passage(d + z), query(q_a)), 0, 1).
  PertinenceScore pertinence(const Detail& detail, const ArchetypalQuestion& question);
  // clamp(cosine(passage(a.text), passage(b.text)), 0, 1).
  double similarity(const Detail& a, const Detail& b);

  const std::string& backend_id() const { return backend_id_; }
  EmbeddingCache& cache() { return *cache_; }

 private:
  std::shared_ptr<EmbeddingBackend> backend_;
  EngineOptions options_;
  std::shared_ptr<EmbeddingCache> cache_;
  std::string backend_id_;
};

}  // namespace dox
