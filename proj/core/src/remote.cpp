#include <algorithm>
#include <functional>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "reviewscope/embedding.hpp"
#include "reviewscope/error.hpp"
#include "reviewscope/sentiment.hpp"

namespace reviewscope {

using nlohmann::json;

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path prefix without trailing slash
};

Endpoint parse_endpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("remote URL must include a scheme: \"" + url + "\"");
  const auto path_start = url.find('/', scheme_end + 3);
  Endpoint e;
  e.origin = url.substr(0, path_start);
  if (path_start != std::string::npos) e.prefix = url.substr(path_start);
  while (!e.prefix.empty() && e.prefix.back() == '/') e.prefix.pop_back();
  return e;
}

bool transient(int status) { return status == 429 || status >= 500; }

// POSTs a JSON body and returns the parsed response of a 200 reply.
json post_json(const std::string& base_url, const std::string& route, const json& body,
               const RemoteOptions& options) {
  const Endpoint endpoint = parse_endpoint(base_url);
  httplib::Client client(endpoint.origin);
  const auto timeout_s = static_cast<time_t>(options.timeout.count());
  client.set_connection_timeout(timeout_s, 0);
  client.set_read_timeout(timeout_s, 0);
  client.set_write_timeout(timeout_s, 0);
  const std::string path = endpoint.prefix + route;
  const std::string payload = body.dump();

  std::string last_failure;
  for (int attempt = 0; attempt <= options.retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(options.initial_backoff * (1 << (attempt - 1)));
    auto res = client.Post(path, payload, "application/json");
    if (!res) {
      last_failure = "connection failed (" + httplib::to_string(res.error()) + ")";
      continue;
    }
    if (res->status == 200) {
      json parsed = json::parse(res->body, nullptr, /*allow_exceptions=*/false);
      if (parsed.is_discarded() || !parsed.is_object()) {
        throw TransportError(base_url + path + ": response body is not a JSON object");
      }
      return parsed;
    }
    last_failure = "HTTP " + std::to_string(res->status);
    if (!transient(res->status)) break;
  }
  throw TransportError(base_url + path + ": " + last_failure);
}

template <typename T>
std::vector<T> batched(std::span<const std::string> texts, std::size_t batch_size,
                       const std::function<std::vector<T>(std::span<const std::string>)>& call) {
  std::vector<T> out;
  out.reserve(texts.size());
  const std::size_t step = std::max<std::size_t>(1, batch_size);
  for (std::size_t start = 0; start < texts.size(); start += step) {
    auto part = call(texts.subspan(start, std::min(step, texts.size() - start)));
    for (auto& v : part) out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

RemoteProvider::RemoteProvider(std::string base_url, RemoteOptions options)
    : base_url_(std::move(base_url)), options_(options) {
  parse_endpoint(base_url_);
}

std::size_t RemoteProvider::dim() const { return dim_; }

std::vector<EmbeddingVector> RemoteProvider::embed(std::span<const std::string> texts) const {
  if (texts.empty()) return {};
  return batched<EmbeddingVector>(texts, options_.batch_size, [&](std::span<const std::string> part) {
    json request;
    request["texts"] = json::array();
    for (const auto& t : part) request["texts"].push_back(t);
    const json response = post_json(base_url_, "/embed", request, options_);
    const auto dim_it = response.find("dim");
    const auto vec_it = response.find("vectors");
    if (dim_it == response.end() || !dim_it->is_number_unsigned() || vec_it == response.end() ||
        !vec_it->is_array()) {
      throw TransportError("embed response lacks \"dim\" or \"vectors\"");
    }
    const auto dim = dim_it->get<std::size_t>();
    if (dim == 0) throw TransportError("embed response has dim 0");
    if (dim_ == 0) dim_ = dim;
    if (dim != dim_) {
      throw TransportError("embed response dim " + std::to_string(dim) + " differs from earlier " + std::to_string(dim_));
    }
    if (vec_it->size() != part.size()) {
      throw TransportError("embed response has " + std::to_string(vec_it->size()) + " vectors for " +
                           std::to_string(part.size()) + " texts");
    }
    std::vector<EmbeddingVector> out;
    out.reserve(part.size());
    for (std::size_t i = 0; i < part.size(); ++i) {
      const json& row = (*vec_it)[i];
      if (!row.is_array() || row.size() != dim) {
        throw TransportError("vector for \"" + part[i] + "\" does not have dim " + std::to_string(dim));
      }
      std::vector<double> values;
      values.reserve(dim);
      for (const json& x : row) {
        if (!x.is_number()) throw TransportError("non-numeric component for \"" + part[i] + "\"");
        values.push_back(x.get<double>());
      }
      try {
        out.emplace_back(std::move(values));
      } catch (const EmbeddingError& e) {
        throw TransportError("vector for \"" + part[i] + "\": " + e.what());
      }
    }
    return out;
  });
}

RemoteScorer::RemoteScorer(std::string base_url, RemoteOptions options)
    : base_url_(std::move(base_url)), options_(options) {
  parse_endpoint(base_url_);
}

std::vector<SentimentScore> RemoteScorer::score(std::span<const Sentence> sentences) const {
  std::vector<std::string> texts;
  texts.reserve(sentences.size());
  for (const Sentence& s : sentences) texts.push_back(s.text);
  if (texts.empty()) return {};
  return batched<SentimentScore>(texts, options_.batch_size, [&](std::span<const std::string> part) {
    json request;
    request["texts"] = json::array();
    for (const auto& t : part) request["texts"].push_back(t);
    const json response = post_json(base_url_, "/score", request, options_);
    const auto it = response.find("scores");
    if (it == response.end() || !it->is_array() || it->size() != part.size()) {
      throw TransportError("score response lacks an aligned \"scores\" array");
    }
    std::vector<SentimentScore> out;
    for (const json& x : *it) {
      if (!x.is_number()) throw TransportError("non-numeric sentiment score");
      try {
        out.emplace_back(x.get<double>());
      } catch (const ValidationError& e) {
        throw TransportError(e.what());
      }
    }
    return out;
  });
}

}  // namespace reviewscope
