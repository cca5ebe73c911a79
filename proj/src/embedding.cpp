#include "dox/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "dox/text.hpp"

namespace dox {

std::string_view to_string(Role role) {
  return role == Role::kQuery ? "query" : "passage";
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw std::invalid_argument("cosine: dimension mismatch (" + std::to_string(u.size()) +
                                " vs " + std::to_string(v.size()) + ")");
  }
  double dot = 0.0;
  double nu = 0.0;
  double nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

double cosine(const EmbeddingVector& u, const EmbeddingVector& v) {
  return cosine(u.values, v.values);
}

// ---------------------------------------------------------------------------
// LexicalBackend

LexicalBackend::LexicalBackend(std::size_t dims) : dims_(dims) {
  if (dims_ == 0) throw std::invalid_argument("lexical backend needs at least one dimension");
}

std::string LexicalBackend::id() const {
  return "lexical-" + std::to_string(dims_);
}

std::vector<std::size_t> LexicalBackend::feature_buckets(std::string_view input) const {
  std::vector<std::size_t> buckets;
  const std::string lowered = " " + text::collapse_whitespace(text::to_lower(input)) + " ";
  if (lowered.size() > 2) {
    for (std::size_t n = 3; n <= 5; ++n) {
      for (std::size_t i = 0; i + n <= lowered.size(); ++i) {
        std::string feature = "c:";
        feature.append(lowered, i, n);
        buckets.push_back(text::fnv1a64(feature) % dims_);
      }
    }
  }
  for (const text::Token& tok : text::tokenize(input)) {
    if (!tok.is_word()) continue;
    buckets.push_back(text::fnv1a64("w:" + text::stem(text::to_lower(tok.text))) % dims_);
  }
  return buckets;
}

std::vector<double> LexicalBackend::embed_one(std::string_view input) const {
  std::vector<double> v(dims_, 0.0);
  for (std::size_t b : feature_buckets(input)) v[b] += 1.0;
  double norm = 0.0;
  for (double x : v) norm += x * x;
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
  }
  return v;
}

std::vector<std::vector<double>> LexicalBackend::embed_batch(std::span<const std::string> texts,
                                                             Role) {
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (const std::string& t : texts) out.push_back(embed_one(t));
  return out;
}

// ---------------------------------------------------------------------------
// EmbeddingCache

EmbeddingCache::EmbeddingCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(*dir_, ec);
}

std::string EmbeddingCache::key(std::string_view backend_id, Role role,
                                std::string_view text) const {
  std::string k(backend_id);
  k.push_back('\x1f');
  k += to_string(role);
  k.push_back('\x1f');
  k += text::sha256_hex(text);
  return k;
}

std::filesystem::path EmbeddingCache::file_for(const std::string& k) const {
  return *dir_ / (text::sha256_hex(k) + ".vec");
}

std::optional<std::vector<double>> EmbeddingCache::get(std::string_view backend_id, Role role,
                                                       std::string_view text) {
  const std::string k = key(backend_id, role, text);
  {
    std::unique_lock lock(mu_);
    if (auto it = entries_.find(k); it != entries_.end()) {
      ++hits_;
      return it->second;
    }
  }
  if (!dir_) return std::nullopt;

  std::ifstream in(file_for(k), std::ios::binary);
  if (!in) return std::nullopt;
  std::uint64_t n = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!in || n > (1u << 24)) return std::nullopt;
  std::vector<double> values(n);
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) return std::nullopt;

  std::unique_lock lock(mu_);
  ++hits_;
  entries_.try_emplace(k, values);
  return values;
}

void EmbeddingCache::put(std::string_view backend_id, Role role, std::string_view text,
                         const std::vector<double>& values) {
  const std::string k = key(backend_id, role, text);
  {
    std::unique_lock lock(mu_);
    entries_.insert_or_assign(k, values);
  }
  if (!dir_) return;
  // Write-then-rename so concurrent readers never see a torn file.
  const auto final_path = file_for(k);
  auto tmp = final_path;
  tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return;
    const std::uint64_t n = values.size();
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(n * sizeof(double)));
    if (!out) return;
  }
  std::error_code ec;
  std::filesystem::rename(tmp, final_path, ec);
}

std::size_t EmbeddingCache::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

std::size_t EmbeddingCache::hits() const {
  std::shared_lock lock(mu_);
  return hits_;
}

}  // namespace dox
