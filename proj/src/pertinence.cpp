#include "dox/pertinence.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "dox/text.hpp"

namespace dox {

std::string passage_text(const Detail& detail) {
  std::string joined = detail.text + ". " + detail.context;
  std::size_t tokens = 0;
  bool in_token = false;
  for (std::size_t i = 0; i < joined.size(); ++i) {
    const bool space = joined[i] == ' ' || joined[i] == '\t' || joined[i] == '\n' ||
                       joined[i] == '\r' || joined[i] == '\f' || joined[i] == '\v';
    if (!space && !in_token) {
      if (++tokens > kMaxPassageTokens) {
        joined.resize(i);
        return text::trim(joined);
      }
    }
    in_token = !space;
  }
  return joined;
}

PertinenceEngine::PertinenceEngine(std::shared_ptr<EmbeddingBackend> backend,
                                   EngineOptions options, std::shared_ptr<EmbeddingCache> cache)
    : backend_(std::move(backend)),
      options_(options),
      cache_(cache ? std::move(cache) : std::make_shared<EmbeddingCache>()),
      backend_id_(backend_->id()) {
  options_.jobs = std::max<std::size_t>(1, options_.jobs);
}

std::vector<EmbeddingVector> PertinenceEngine::embed(std::span<const std::string> texts,
                                                     Role role) {
  std::map<std::string_view, std::vector<double>> resolved;
  std::vector<std::string> missing;
  for (const std::string& t : texts) {
    if (resolved.contains(t)) continue;
    if (options_.use_cache) {
      if (auto hit = cache_->get(backend_id_, role, t)) {
        resolved.emplace(t, std::move(*hit));
        continue;
      }
    }
    resolved.emplace(t, std::vector<double>{});
    missing.push_back(t);
  }

  const std::size_t limit = backend_->max_batch();
  const std::size_t batches = (missing.size() + limit - 1) / limit;
  std::vector<std::vector<std::vector<double>>> results(batches);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&] {
    for (std::size_t b = next++; b < batches; b = next++) {
      const std::size_t begin = b * limit;
      const std::size_t end = std::min(missing.size(), begin + limit);
      try {
        results[b] = backend_->embed_batch(
            std::span<const std::string>(missing).subspan(begin, end - begin), role);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = batches;
      }
    }
  };
  const std::size_t workers = std::min(options_.jobs, batches);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t b = 0; b < batches; ++b) {
    for (std::size_t k = 0; k < results[b].size(); ++k) {
      const std::string& t = missing[b * limit + k];
      if (options_.use_cache) cache_->put(backend_id_, role, t, results[b][k]);
      resolved[t] = std::move(results[b][k]);
    }
  }

  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const std::string& t : texts) out.push_back({resolved.at(t), role, backend_id_});
  return out;
}

PertinenceScore PertinenceEngine::pertinence(const Detail& detail,
                                             const ArchetypalQuestion& question) {
  const std::string passage = passage_text(detail);
  const auto p = embed(std::span(&passage, 1), Role::kPassage);
  const auto q = embed(std::span(&question.text, 1), Role::kQuery);
  return {detail.id, question, std::clamp(cosine(p[0], q[0]), 0.0, 1.0)};
}

double PertinenceEngine::similarity(const Detail& a, const Detail& b) {
  const std::vector<std::string> texts = {a.text, b.text};
  const auto v = embed(texts, Role::kPassage);
  return std::clamp(cosine(v[0], v[1]), 0.0, 1.0);
}

}  // namespace dox
