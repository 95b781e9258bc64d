#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reviewscope/dictionary.hpp"
#include "reviewscope/embedding.hpp"

namespace reviewscope {

enum class DensityMode {
  mean_pairwise,  // mean cosine over unordered member pairs
  min_pairwise,   // smallest pairwise cosine
};

std::string_view to_string(DensityMode mode);
DensityMode parse_density_mode(std::string_view name);

struct ClusterParams {
  double density_threshold = 0.7;
  std::size_t min_size = 5;
  std::size_t max_depth = 32;
  std::size_t split_arity = 2;
  DensityMode density_mode = DensityMode::mean_pairwise;

  /// Throws ConfigError unless -1 < threshold <= 1, min_size >= 1,
  /// max_depth >= 1 and split_arity >= 2.
  void validate() const;
};

enum class ClusterStatus { accepted, outlier };
std::string_view to_string(ClusterStatus status);

struct PhraseVector {
  std::string text;
  EmbeddingVector vector;
};

struct TopicCluster {
  std::size_t id = 0;
  std::vector<PhraseVector> members;
  double density = 0.0;
  ClusterStatus status = ClusterStatus::outlier;
  std::size_t depth = 0;  // recursion level, root = 0
};

struct ClusteringResult {
  std::vector<TopicCluster> accepted;
  std::vector<TopicCluster> outliers;
};

/// 1 for a single member; otherwise the mean (or minimum) pairwise cosine
/// similarity. Throws DensityError for no members or a zero-norm member.
double cluster_density(std::span<const EmbeddingVector> members,
                       DensityMode mode = DensityMode::mean_pairwise);

/// Bottom-up average-linkage merging on cosine distance (1 - cos) until
/// min(arity, |members|) groups remain. Each group lists member indices in
/// ascending order; groups are ordered by their smallest index. The pair with
/// the smallest distance merges first, ties going to the lexicographically
/// smallest (lower index, higher index) pair. Throws SplitError for fewer than
/// two members or arity < 2.
std::vector<std::vector<std::size_t>> agglomerative_split(std::span<const EmbeddingVector> members,
                                                          std::size_t arity = 2);

/// Recursive density clustering. A set smaller than min_size is an outlier,
/// a set at or above the density threshold is accepted, a set at max_depth is
/// an outlier, and anything else is split and each part recursed on. Ids
/// follow depth-first discovery order across both lists. Throws
/// ClusteringError on empty input, mixed dimensions, zero-norm vectors or
/// duplicate phrase texts.
ClusteringResult recursive_cluster(std::vector<PhraseVector> phrases, const ClusterParams& params = {});

/// Token union of every member phrase of the accepted clusters.
TopicDictionary build_dictionary(std::span<const TopicCluster> accepted,
                                 std::string source = "Keyphrase embedding");

/// `cluster_id<TAB>density<TAB>status<TAB>phrase` lines in id order, density
/// with 6 decimals.
void write_topics(const ClusteringResult& result, std::ostream& out);

}  // namespace reviewscope
