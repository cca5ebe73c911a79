#include <httplib.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <thread>

#include "dox/embedding.hpp"
#include "dox/error.hpp"

namespace dox {
namespace {

// Splits "http://host:port/prefix" into ("http://host:port", "/prefix").
std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("backend URL lacks a scheme: " + url);
  const auto path_begin = url.find('/', scheme_end + 3);
  if (path_begin == std::string::npos) return {url, ""};
  std::string prefix = url.substr(path_begin);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, path_begin), prefix};
}

std::string error_message(const httplib::Result& res) {
  try {
    auto body = nlohmann::json::parse(res->body);
    if (body.is_object() && body.contains("error") && body["error"].is_string()) {
      return body["error"].get<std::string>();
    }
  } catch (const nlohmann::json::exception&) {
  }
  return res->body;
}

}  // namespace

RemoteBackend::RemoteBackend(RemoteOptions options) : options_(std::move(options)) {
  if (options_.max_batch == 0) throw ConfigError("remote backend batch limit must be positive");
  std::tie(host_, path_prefix_) = split_url(options_.url);
}

std::string RemoteBackend::id() const {
  return "remote:" + options_.model + "@" + options_.url;
}

std::vector<std::vector<double>> RemoteBackend::embed_batch(std::span<const std::string> texts,
                                                            Role role) {
  std::vector<std::string> batch(texts.begin(), texts.end());
  if (batch.size() > options_.max_batch) {
    throw BackendError("batch of " + std::to_string(batch.size()) + " exceeds limit " +
                           std::to_string(options_.max_batch),
                       batch);
  }
  const nlohmann::json request = {
      {"model", options_.model}, {"role", std::string(to_string(role))}, {"texts", batch}};
  const std::string body = request.dump();

  httplib::Headers headers;
  if (!options_.bearer_token.empty()) {
    headers.emplace("Authorization", "Bearer " + options_.bearer_token);
  }

  std::string last_error;
  auto backoff = options_.backoff;
  for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client client(host_);
    client.set_connection_timeout(options_.timeout);
    client.set_read_timeout(options_.timeout);
    client.set_write_timeout(options_.timeout);
    auto res = client.Post(path_prefix_ + "/embed", headers, body, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status) + ": " + error_message(res);
      continue;
    }
    if (res->status != 200) {
      throw BackendError("embedding request rejected with HTTP " + std::to_string(res->status) +
                             ": " + error_message(res),
                         batch);
    }

    nlohmann::json reply;
    try {
      reply = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      throw BackendError(std::string("malformed embedding response: ") + e.what(), batch);
    }
    if (!reply.is_object() || !reply.contains("dims") || !reply["dims"].is_number_integer() ||
        !reply.contains("vectors") || !reply["vectors"].is_array()) {
      throw BackendError("embedding response lacks \"dims\" or \"vectors\"", batch);
    }
    const auto dims = reply["dims"].get<long long>();
    const auto& vectors = reply["vectors"];
    if (dims <= 0 || vectors.size() != batch.size()) {
      throw BackendError("embedding response has " + std::to_string(vectors.size()) +
                             " vectors for " + std::to_string(batch.size()) + " texts",
                         batch);
    }
    std::vector<std::vector<double>> out;
    out.reserve(vectors.size());
    for (const auto& v : vectors) {
      if (!v.is_array() || static_cast<long long>(v.size()) != dims) {
        throw BackendError("embedding vector length differs from dims", batch);
      }
      std::vector<double> values;
      values.reserve(v.size());
      for (const auto& x : v) {
        if (!x.is_number()) throw BackendError("non-numeric embedding entry", batch);
        const double d = x.get<double>();
        if (!std::isfinite(d)) throw BackendError("non-finite embedding entry", batch);
        values.push_back(d);
      }
      out.push_back(std::move(values));
    }
    return out;
  }
  throw BackendError("embedding backend unreachable after " +
                         std::to_string(options_.max_retries + 1) + " attempts (" + last_error + ")",
                     batch);
}

}  // namespace dox
