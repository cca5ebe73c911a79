#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dox {

enum class Role { kQuery, kPassage };

std::string_view to_string(Role role);

struct EmbeddingVector {
  std::vector<double> values;
  Role role = Role::kPassage;
  std::string backend_id;

  std::size_t dims() const { return values.size(); }
};

// Cosine similarity clamped to [-1, 1]; 0 when either vector is all zeros.
// Throws std::invalid_argument on a dimension mismatch.
double cosine(std::span<const double> u, std::span<const double> v);
double cosine(const EmbeddingVector& u, const EmbeddingVector& v);

// Implementations must be safe to call from several threads at once.
class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;

  virtual std::string id() const = 0;
  // Largest number of texts accepted by one embed_batch call.
  virtual std::size_t max_batch() const = 0;
  // Returns one vector per input text, in input order.
  virtual std::vector<std::vector<double>> embed_batch(std::span<const std::string> texts,
                                                       Role role) = 0;
};

// Hashed character 3-5-grams of the lowercased, whitespace-collapsed text
// (padded with one space on each side) plus hashed stemmed word tokens,
// summed and L2-normalized. The same encoder serves both roles.
class LexicalBackend final : public EmbeddingBackend {
 public:
  static constexpr std::size_t kDefaultDims = 2048;

  explicit LexicalBackend(std::size_t dims = kDefaultDims);

  std::string id() const override;
  std::size_t max_batch() const override { return 4096; }
  std::vector<std::vector<double>> embed_batch(std::span<const std::string> texts,
                                               Role role) override;

  std::vector<double> embed_one(std::string_view text) const;
  // Hash buckets touched by a text, before weighting. Exposed for tests that
  // need feature-disjoint inputs.
  std::vector<std::size_t> feature_buckets(std::string_view text) const;

  std::size_t dims() const { return dims_; }

 private:
  std::size_t dims_;
};

struct RemoteOptions {
  std::string url;  // scheme://host[:port][/prefix]; requests go to <prefix>/embed
  std::string model;
  std::string bearer_token;
  std::size_t max_batch = 64;
  int max_retries = 3;
  std::chrono::milliseconds backoff{500};  // doubled after every failed attempt
  std::chrono::seconds timeout{30};
};

// POST /embed {"model", "role", "texts"} -> {"dims", "vectors"}. Transport
// failures and 5xx responses are retried with exponential backoff; any
// other non-200 status fails immediately. Throws BackendError carrying the
// failing batch.
class RemoteBackend final : public EmbeddingBackend {
 public:
  explicit RemoteBackend(RemoteOptions options);

  std::string id() const override;
  std::size_t max_batch() const override { return options_.max_batch; }
  std::vector<std::vector<double>> embed_batch(std::span<const std::string> texts,
                                               Role role) override;

 private:
  RemoteOptions options_;
  std::string host_;
  std::string path_prefix_;
};

// Thread-safe map from (backend id, role, sha256(text)) to a vector. When a
// directory is given, entries are also persisted there and read back on a
// miss.
class EmbeddingCache {
 public:
  EmbeddingCache() = default;
  explicit EmbeddingCache(std::filesystem::path dir);

  std::optional<std::vector<double>> get(std::string_view backend_id, Role role,
                                         std::string_view text);
  void put(std::string_view backend_id, Role role, std::string_view text,
           const std::vector<double>& values);

  std::size_t size() const;
  std::size_t hits() const;

 private:
  std::string key(std::string_view backend_id, Role role, std::string_view text) const;
  std::filesystem::path file_for(const std::string& key) const;

  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, std::vector<double>> entries_;
  std::size_t hits_ = 0;
  std::optional<std::filesystem::path> dir_;
};

}  // namespace dox
