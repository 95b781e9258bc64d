#include "reviewscope/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>
#include <unordered_map>

#include "reviewscope/config.hpp"
#include "reviewscope/error.hpp"
#include "reviewscope/random.hpp"

namespace reviewscope {

EmbeddingVector::EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw EmbeddingError("embedding vector must have dim >= 1");
  for (double v : values_) {
    if (!std::isfinite(v)) throw EmbeddingError("embedding vector has a non-finite component");
  }
}

double EmbeddingVector::norm() const {
  double s = 0;
  for (double v : values_) s += v * v;
  return std::sqrt(s);
}

double cosine_similarity(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw SimilarityError("dimension mismatch: " + std::to_string(x.size()) + " vs " + std::to_string(y.size()));
  }
  double dot = 0;
  double xx = 0;
  double yy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot += x[i] * y[i];
    xx += x[i] * x[i];
    yy += y[i] * y[i];
  }
  const double nx = std::sqrt(xx);
  const double ny = std::sqrt(yy);
  if (nx < kZeroNormThreshold || ny < kZeroNormThreshold) {
    throw SimilarityError("cosine similarity of a zero-norm vector");
  }
  return std::clamp(dot / (nx * ny), -1.0, 1.0);
}

EmbeddingStore::EmbeddingStore(std::size_t dim) : dim_(dim) {
  if (dim_ == 0) throw EmbeddingError("store dim must be >= 1");
}

void EmbeddingStore::add(std::string key, EmbeddingVector vector) {
  if (vector.dim() != dim_) {
    throw EmbeddingError("vector for \"" + key + "\" has dim " + std::to_string(vector.dim()) + ", store dim is " +
                         std::to_string(dim_));
  }
  if (index_.contains(key)) throw EmbeddingError("duplicate store key \"" + key + "\"");
  index_.emplace(key, entries_.size());
  entries_.emplace_back(std::move(key), std::move(vector));
}

const EmbeddingVector* EmbeddingStore::find(std::string_view key) const {
  auto it = index_.find(std::string(key));
  return it == index_.end() ? nullptr : &entries_[it->second].second;
}

std::vector<EmbeddingVector> StoreProvider::embed(std::span<const std::string> texts) const {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const std::string& t : texts) {
    const EmbeddingVector* v = store_->find(t);
    if (v == nullptr) throw LookupError(t);
    out.push_back(*v);
  }
  return out;
}

namespace {

std::vector<double> gaussian_unit(std::uint64_t state, std::size_t dim) {
  std::mt19937_64 rng(state);
  std::vector<double> v(dim);
  for (std::size_t i = 0; i < dim; i += 2) {
    const double u1 = 1.0 - uniform_real(rng);  // (0, 1]
    const double u2 = uniform_real(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    v[i] = r * std::cos(2.0 * std::numbers::pi * u2);
    if (i + 1 < dim) v[i + 1] = r * std::sin(2.0 * std::numbers::pi * u2);
  }
  double s = 0;
  for (double x : v) s += x * x;
  const double n = std::sqrt(s);
  for (double& x : v) x /= n;
  return v;
}

std::uint64_t token_state(std::string_view token, std::uint64_t seed) {
  return splitmix64(fnv1a64(token) ^ splitmix64(seed));
}

EmbeddingVector normalized(std::vector<double> v) {
  double s = 0;
  for (double x : v) s += x * x;
  const double n = std::sqrt(s);
  if (n < kZeroNormThreshold) throw EmbeddingError("test embedding collapsed to a zero vector");
  for (double& x : v) x /= n;
  return EmbeddingVector(std::move(v));
}

}  // namespace

EmbeddingVector test_token_vector(std::string_view token, std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw EmbeddingError("dim must be >= 1");
  return EmbeddingVector(gaussian_unit(token_state(token, seed), dim));
}

TestEmbedder::TestEmbedder(TestEmbedderOptions options) : options_(std::move(options)) {
  if (options_.dim == 0) throw EmbeddingError("dim must be >= 1");
  if (!(options_.group_noise >= 0.0)) throw EmbeddingError("group_noise must be >= 0");
}

EmbeddingVector TestEmbedder::token_vector(std::string_view token) const {
  EmbeddingVector own = test_token_vector(token, options_.dim, options_.seed);
  auto it = options_.token_groups.find(std::string(token));
  if (it == options_.token_groups.end()) return own;
  // Group directions live in a separate key space from tokens.
  const std::vector<double> group = gaussian_unit(token_state("\x1fgroup\x1f" + it->second, options_.seed), options_.dim);
  std::vector<double> v(options_.dim);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = group[i] + options_.group_noise * own[i];
  return normalized(std::move(v));
}

namespace {

template <typename Lookup>
EmbeddingVector mean_token_vector(std::string_view text, std::size_t dim, Lookup&& lookup) {
  const std::vector<std::string> tokens = split_whitespace(text);
  if (tokens.empty()) throw EmbeddingError("cannot embed a text without tokens");
  std::vector<double> sum(dim, 0.0);
  for (const std::string& t : tokens) {
    const EmbeddingVector& v = lookup(t);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += v[i];
  }
  for (double& x : sum) x /= static_cast<double>(tokens.size());
  return normalized(std::move(sum));
}

}  // namespace

EmbeddingVector TestEmbedder::embed_one(std::string_view text) const {
  EmbeddingVector scratch;
  return mean_token_vector(text, options_.dim, [&](const std::string& t) -> const EmbeddingVector& {
    scratch = token_vector(t);
    return scratch;
  });
}

std::vector<EmbeddingVector> TestEmbedder::embed(std::span<const std::string> texts) const {
  std::unordered_map<std::string, EmbeddingVector> cache;
  auto lookup = [&](const std::string& t) -> const EmbeddingVector& {
    auto it = cache.find(t);
    if (it == cache.end()) it = cache.emplace(t, token_vector(t)).first;
    return it->second;
  };
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const std::string& t : texts) out.push_back(mean_token_vector(t, options_.dim, lookup));
  return out;
}

EmbeddingVector embed_test(std::string_view text, std::size_t dim, std::uint64_t seed) {
  return TestEmbedder(TestEmbedderOptions{dim, seed, {}, 0.25}).embed_one(text);
}

std::unique_ptr<EmbeddingProvider> make_provider(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string kind(spec.substr(0, colon));
  const std::string arg = colon == std::string_view::npos ? "" : std::string(spec.substr(colon + 1));
  if (kind == "test") {
    TestEmbedderOptions options;
    const auto parts = split(arg, ':');
    if (arg.empty() || parts.size() > 2) throw ConfigError("test provider must be test:<seed>[:<dim>]");
    const long long seed = parse_integer("provider seed", parts[0]);
    if (seed < 0) throw ConfigError("provider seed must be >= 0");
    options.seed = static_cast<std::uint64_t>(seed);
    if (parts.size() == 2) {
      const long long dim = parse_integer("provider dim", parts[1]);
      if (dim < 1) throw ConfigError("provider dim must be >= 1");
      options.dim = static_cast<std::size_t>(dim);
    }
    return std::make_unique<TestEmbedder>(std::move(options));
  }
  if (kind == "store") {
    if (arg.empty()) throw ConfigError("store provider must be store:<path>");
    return std::make_unique<StoreProvider>(std::make_shared<const EmbeddingStore>(load_store(arg)));
  }
  if (kind == "remote") {
    std::string url = arg;
    if (const char* env = std::getenv(kEmbedUrlEnv); env != nullptr && *env != '\0') url = env;
    if (url.empty()) throw ConfigError(std::string("remote provider needs a URL or ") + kEmbedUrlEnv);
    return std::make_unique<RemoteProvider>(std::move(url));
  }
  throw ConfigError("unknown provider \"" + std::string(spec) + "\"");
}

}  // namespace reviewscope
