#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "reviewscope/remote.hpp"

namespace reviewscope {

inline constexpr std::size_t kDefaultEmbeddingDim = 768;

/// Norms below this are treated as zero in similarity computations.
inline constexpr double kZeroNormThreshold = 1e-12;

/// Non-empty vector of finite components.
class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  /// Throws EmbeddingError when values is empty or holds a non-finite entry.
  explicit EmbeddingVector(std::vector<double> values);

  std::size_t dim() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double norm() const;

  bool operator==(const EmbeddingVector&) const = default;

 private:
  std::vector<double> values_;
};

/// sum(x_i * y_i) / (|x| * |y|), clamped to [-1, 1]. Throws SimilarityError
/// on a dimension mismatch or a norm below kZeroNormThreshold.
double cosine_similarity(std::span<const double> x, std::span<const double> y);
inline double cosine_similarity(const EmbeddingVector& x, const EmbeddingVector& y) {
  return cosine_similarity(x.values(), y.values());
}

/// Phrase-keyed vectors of a single dimension, kept in insertion order.
class EmbeddingStore {
 public:
  explicit EmbeddingStore(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Throws EmbeddingError on a dim mismatch or a duplicate key.
  void add(std::string key, EmbeddingVector vector);
  const EmbeddingVector* find(std::string_view key) const;
  const std::vector<std::pair<std::string, EmbeddingVector>>& entries() const { return entries_; }

  bool operator==(const EmbeddingStore& other) const {
    return dim_ == other.dim_ && entries_ == other.entries_;
  }

 private:
  std::size_t dim_;
  std::vector<std::pair<std::string, EmbeddingVector>> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline constexpr std::uint32_t kStoreVersion = 1;

/// Binary layout, little-endian: "EMBS", u32 version, u32 dim, u64 count, then
/// per record u32 key length, key bytes, dim float32. Components are narrowed
/// to float32 on write.
void write_store(const EmbeddingStore& store, std::ostream& out);
void write_store(const EmbeddingStore& store, const std::filesystem::path& path);

/// Throws FormatError with the byte offset of the first fault. A non-zero
/// expected_dim additionally rejects stores of another dimension.
EmbeddingStore read_store(std::span<const std::byte> bytes, std::size_t expected_dim = 0);
EmbeddingStore load_store(const std::filesystem::path& path, std::size_t expected_dim = 0);

/// Deterministic embedding for tests: each distinct whitespace token maps to
/// a seeded pseudo-random unit vector and the text embeds as the normalized
/// mean over its tokens. Throws EmbeddingError for a text without tokens.
EmbeddingVector embed_test(std::string_view text, std::size_t dim, std::uint64_t seed);

/// Unit vector assigned to a single token by embed_test.
EmbeddingVector test_token_vector(std::string_view token, std::size_t dim, std::uint64_t seed);

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  /// One vector per text, order-aligned.
  virtual std::vector<EmbeddingVector> embed(std::span<const std::string> texts) const = 0;
  /// Dimension of returned vectors; 0 while unknown (remote before first call).
  virtual std::size_t dim() const = 0;
};

/// Exact-match lookups; a miss throws LookupError naming the phrase.
class StoreProvider final : public EmbeddingProvider {
 public:
  explicit StoreProvider(std::shared_ptr<const EmbeddingStore> store) : store_(std::move(store)) {}
  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) const override;
  std::size_t dim() const override { return store_->dim(); }

 private:
  std::shared_ptr<const EmbeddingStore> store_;
};

struct TestEmbedderOptions {
  std::size_t dim = kDefaultEmbeddingDim;
  std::uint64_t seed = 0;
  /// Tokens sharing a group embed near-parallel: the token vector becomes
  /// normalize(group_vector + group_noise * own_vector).
  std::map<std::string, std::string> token_groups;
  double group_noise = 0.25;
};

class TestEmbedder final : public EmbeddingProvider {
 public:
  explicit TestEmbedder(TestEmbedderOptions options);
  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) const override;
  std::size_t dim() const override { return options_.dim; }

  EmbeddingVector embed_one(std::string_view text) const;
  EmbeddingVector token_vector(std::string_view token) const;

 private:
  TestEmbedderOptions options_;
};

/// HTTP POST `<url>/embed` with `{"texts": [...]}`; expects status 200 and
/// `{"dim": d, "vectors": [[...], ...]}`. Connection failures, 429 and 5xx
/// are retried with exponential backoff; anything else is a TransportError.
class RemoteProvider final : public EmbeddingProvider {
 public:
  explicit RemoteProvider(std::string base_url, RemoteOptions options = {});
  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) const override;
  std::size_t dim() const override;

 private:
  std::string base_url_;
  RemoteOptions options_;
  mutable std::size_t dim_ = 0;
};

/// Name of the environment variable that overrides the remote endpoint.
inline constexpr const char* kEmbedUrlEnv = "REVIEWSCOPE_EMBED_URL";

/// Resolves "test:<seed>[:<dim>]", "store:<path>" or "remote[:<url>]".
/// For remote providers REVIEWSCOPE_EMBED_URL, when set, overrides the URL.
std::unique_ptr<EmbeddingProvider> make_provider(std::string_view spec);

/// Free-function form of provider.embed for symmetry with the other stages.
inline std::vector<EmbeddingVector> embed(const EmbeddingProvider& provider,
                                          std::span<const std::string> texts) {
  return provider.embed(texts);
}

struct Point2 {
  double x = 0;
  double y = 0;
};

/// Projects mean-centered vectors onto their top two principal axes,
/// ordered by descending variance. Axis signs are fixed so the largest
/// magnitude loading of each axis is positive. Throws ProjectionError for
/// fewer than two vectors, mixed dimensions, or zero total variance.
std::vector<Point2> pca_project_2d(std::span<const EmbeddingVector> vectors);

}  // namespace reviewscope
