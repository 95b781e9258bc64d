#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "reviewscope/clustering.hpp"
#include "reviewscope/error.hpp"

using namespace reviewscope;
using Groups = std::vector<std::vector<std::size_t>>;

namespace {

EmbeddingVector basis(std::size_t dim, std::size_t axis) {
  std::vector<double> v(dim, 0.0);
  v[axis] = 1.0;
  return EmbeddingVector(v);
}

std::vector<PhraseVector> copies(const EmbeddingVector& v, std::size_t n, const std::string& prefix) {
  std::vector<PhraseVector> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({prefix + std::to_string(i), v});
  return out;
}

// Points scattered around a few random centers with per-center spread.
std::vector<PhraseVector> clustered_points(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> spread(0.05, 1.5);
  const std::size_t centers = 1 + rng() % 6;
  std::vector<std::vector<double>> c(centers, std::vector<double>(dim));
  std::vector<double> s(centers);
  for (std::size_t k = 0; k < centers; ++k) {
    for (double& x : c[k]) x = g(rng);
    s[k] = spread(rng);
  }
  std::vector<PhraseVector> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = rng() % centers;
    std::vector<double> v(dim);
    for (std::size_t d = 0; d < dim; ++d) v[d] = c[k][d] + s[k] * g(rng);
    out.push_back({"p" + std::to_string(i), EmbeddingVector(v)});
  }
  return out;
}

std::vector<EmbeddingVector> vectors_of(const std::vector<PhraseVector>& p) {
  std::vector<EmbeddingVector> out;
  for (const auto& x : p) out.push_back(x.vector);
  return out;
}

std::set<std::string> accepted_texts(const ClusteringResult& r) {
  std::set<std::string> out;
  for (const auto& c : r.accepted) {
    for (const auto& m : c.members) out.insert(m.text);
  }
  return out;
}

}  // namespace

TEST(ClusterDensity, Examples) {
  const std::vector<EmbeddingVector> same(5, EmbeddingVector({0.3, -2.0, 1.0}));
  EXPECT_NEAR(cluster_density(same), 1.0, 1e-12);
  const std::vector<EmbeddingVector> ortho{basis(2, 0), basis(2, 1)};
  EXPECT_NEAR(cluster_density(ortho), 0.0, 1e-15);
  const std::vector<EmbeddingVector> three{EmbeddingVector({1, 0}), EmbeddingVector({1, 1}), EmbeddingVector({0, 1})};
  EXPECT_NEAR(cluster_density(three), 0.4714, 1e-4);
  EXPECT_NEAR(cluster_density(three, DensityMode::min_pairwise), 0.0, 1e-15);
  const std::vector<EmbeddingVector> single{EmbeddingVector({4, 4})};
  EXPECT_EQ(cluster_density(single), 1.0);
}

TEST(ClusterDensity, MatchesPairwiseMeanOnRandomSets) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto pts = clustered_points(rng, 2 + rng() % 40, 6);
    EXPECT_NEAR(cluster_density(vectors_of(pts)), testkit::pairwise_mean_density(pts), 1e-12);
  }
}

TEST(ClusterDensity, Errors) {
  EXPECT_THROW(cluster_density(std::vector<EmbeddingVector>{}), DensityError);
  const std::vector<EmbeddingVector> zero{EmbeddingVector({1, 0}), EmbeddingVector({0, 0})};
  EXPECT_THROW(cluster_density(zero), DensityError);
  const std::vector<EmbeddingVector> mixed{EmbeddingVector({1, 0}), EmbeddingVector({0, 0, 1})};
  EXPECT_THROW(cluster_density(mixed), DensityError);
}

TEST(AgglomerativeSplit, SeparatesDuplicateGroups) {
  std::vector<EmbeddingVector> pts;
  for (std::size_t i = 0; i < 6; ++i) pts.push_back(basis(3, i % 2));
  EXPECT_EQ(agglomerative_split(pts, 2), (Groups{{0, 2, 4}, {1, 3, 5}}));
}

TEST(AgglomerativeSplit, TwoMembersBecomeSingletons) {
  const std::vector<EmbeddingVector> pts{EmbeddingVector({1, 0}), EmbeddingVector({1, 0.1})};
  EXPECT_EQ(agglomerative_split(pts, 2), (Groups{{0}, {1}}));
  EXPECT_EQ(agglomerative_split(pts, 5), (Groups{{0}, {1}}));
}

TEST(AgglomerativeSplit, TiesGoToLowestPair) {
  // all pairwise distances equal: (0,1) merges first, then ({0,1},2)
  const std::vector<EmbeddingVector> pts{basis(4, 0), basis(4, 1), basis(4, 2), basis(4, 3)};
  EXPECT_EQ(agglomerative_split(pts, 3), (Groups{{0, 1}, {2}, {3}}));
  EXPECT_EQ(agglomerative_split(pts, 2), (Groups{{0, 1, 2}, {3}}));
}

TEST(AgglomerativeSplit, MatchesNaiveReferenceOnSmallSets) {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 2 + rng() % 7;
    const std::size_t dim = 2 + rng() % 5;
    std::vector<EmbeddingVector> pts;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> v(dim);
      for (double& x : v) x = g(rng);
      pts.emplace_back(v);
    }
    const std::size_t arity = 2 + rng() % 3;
    ASSERT_EQ(agglomerative_split(pts, arity), testkit::naive_average_linkage(pts, std::min(arity, n)))
        << "trial " << trial;
  }
}

TEST(AgglomerativeSplit, MatchesNaiveReferenceOnLargerClusteredSets) {
  std::mt19937_64 rng(78);
  for (int trial = 0; trial < 40; ++trial) {
    const auto pts = vectors_of(clustered_points(rng, 10 + rng() % 50, 8));
    ASSERT_EQ(agglomerative_split(pts, 2), testkit::naive_average_linkage(pts, 2)) << "trial " << trial;
  }
}

TEST(AgglomerativeSplit, PartitionsInput) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto pts = vectors_of(clustered_points(rng, 2 + rng() % 100, 5));
    const std::size_t arity = 2 + rng() % 4;
    const auto groups = agglomerative_split(pts, arity);
    EXPECT_EQ(groups.size(), std::min(arity, pts.size()));
    std::vector<std::size_t> all;
    for (const auto& gr : groups) {
      EXPECT_FALSE(gr.empty());
      EXPECT_TRUE(std::is_sorted(gr.begin(), gr.end()));
      all.insert(all.end(), gr.begin(), gr.end());
    }
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < all.size(); ++i) ASSERT_EQ(all[i], i);
    for (std::size_t k = 1; k < groups.size(); ++k) EXPECT_LT(groups[k - 1].front(), groups[k].front());
  }
}

TEST(AgglomerativeSplit, Errors) {
  EXPECT_THROW(agglomerative_split(std::vector<EmbeddingVector>{basis(2, 0)}, 2), SplitError);
  const std::vector<EmbeddingVector> two{basis(2, 0), basis(2, 1)};
  EXPECT_THROW(agglomerative_split(two, 1), SplitError);
  const std::vector<EmbeddingVector> zero{basis(2, 0), EmbeddingVector({0, 0})};
  EXPECT_THROW(agglomerative_split(zero, 2), SplitError);
}

TEST(RecursiveCluster, IdenticalVectorsFormOneCluster) {
  const auto r = recursive_cluster(copies(EmbeddingVector({1, 2, 3}), 10, "x"));
  ASSERT_EQ(r.accepted.size(), 1u);
  EXPECT_EQ(r.accepted[0].members.size(), 10u);
  EXPECT_NEAR(r.accepted[0].density, 1.0, 1e-12);
  EXPECT_EQ(r.accepted[0].depth, 0u);
  EXPECT_TRUE(r.outliers.empty());
}

TEST(RecursiveCluster, TooFewPhrasesAreOutliers) {
  const auto r = recursive_cluster(copies(basis(3, 0), 4, "x"));
  EXPECT_TRUE(r.accepted.empty());
  ASSERT_EQ(r.outliers.size(), 1u);
  EXPECT_EQ(r.outliers[0].members.size(), 4u);
}

TEST(RecursiveCluster, TwoOrthogonalGroups) {
  auto phrases = copies(basis(4, 0), 6, "a");
  const auto b = copies(basis(4, 1), 6, "b");
  phrases.insert(phrases.end(), b.begin(), b.end());
  const auto r = recursive_cluster(phrases);
  ASSERT_EQ(r.accepted.size(), 2u);
  EXPECT_TRUE(r.outliers.empty());
  for (const auto& c : r.accepted) {
    EXPECT_EQ(c.members.size(), 6u);
    EXPECT_EQ(c.depth, 1u);
    const char first = c.members.front().text.front();
    for (const auto& m : c.members) EXPECT_EQ(m.text.front(), first);
  }
  EXPECT_EQ(r.accepted[0].id, 0u);
  EXPECT_EQ(r.accepted[1].id, 1u);
  EXPECT_TRUE(testkit::check_clustering(phrases, {}, r).empty());
}

TEST(RecursiveCluster, IdsFollowDiscoveryOrder) {
  // root splits into {a x6} and {b x3}; the b part is an outlier found second
  auto phrases = copies(basis(3, 0), 6, "a");
  const auto b = copies(basis(3, 1), 3, "b");
  phrases.insert(phrases.end(), b.begin(), b.end());
  const auto r = recursive_cluster(phrases);
  ASSERT_EQ(r.accepted.size(), 1u);
  ASSERT_EQ(r.outliers.size(), 1u);
  EXPECT_EQ(r.accepted[0].id, 0u);
  EXPECT_EQ(r.outliers[0].id, 1u);
}

TEST(RecursiveCluster, DepthLimitMakesOutliers) {
  std::mt19937_64 rng(1);
  std::vector<PhraseVector> phrases;
  for (std::size_t i = 0; i < 12; ++i) phrases.push_back({"e" + std::to_string(i), basis(12, i)});
  ClusterParams p;
  p.max_depth = 1;
  const auto r = recursive_cluster(phrases, p);
  EXPECT_TRUE(r.accepted.empty());
  std::size_t total = 0;
  for (const auto& c : r.outliers) {
    EXPECT_LE(c.depth, 1u);
    total += c.members.size();
  }
  EXPECT_EQ(total, 12u);
  EXPECT_TRUE(testkit::check_clustering(phrases, p, r).empty());
}

TEST(RecursiveCluster, RandomInputsSatisfyConstraints) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 150; ++trial) {
    const auto phrases = clustered_points(rng, 1 + rng() % 200, 2 + rng() % 12);
    ClusterParams p;
    p.density_threshold = std::vector<double>{0.5, 0.7, 0.9}[rng() % 3];
    p.min_size = 1 + rng() % 8;
    p.max_depth = 1 + rng() % 12;
    p.split_arity = 2 + rng() % 3;
    p.density_mode = rng() % 4 == 0 ? DensityMode::min_pairwise : DensityMode::mean_pairwise;
    const auto r = recursive_cluster(phrases, p);
    const auto problems = testkit::check_clustering(phrases, p, r);
    ASSERT_TRUE(problems.empty()) << "trial " << trial << ": " << problems.front();
  }
}

TEST(RecursiveCluster, Deterministic) {
  std::mt19937_64 rng(8);
  const auto phrases = clustered_points(rng, 150, 8);
  const auto a = recursive_cluster(phrases);
  const auto b = recursive_cluster(phrases);
  std::ostringstream sa, sb;
  write_topics(a, sa);
  write_topics(b, sb);
  EXPECT_EQ(sa.str(), sb.str());
}

TEST(RecursiveCluster, RaisingThresholdNeverGrowsAcceptedSet) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 60; ++trial) {
    const auto phrases = clustered_points(rng, 20 + rng() % 150, 6);
    std::set<std::string> previous;
    bool first = true;
    for (double theta : {0.5, 0.7, 0.9}) {
      ClusterParams p;
      p.density_threshold = theta;
      const auto accepted = accepted_texts(recursive_cluster(phrases, p));
      if (!first) {
        EXPECT_LE(accepted.size(), previous.size());
        EXPECT_TRUE(std::includes(previous.begin(), previous.end(), accepted.begin(), accepted.end()));
      }
      previous = accepted;
      first = false;
    }
  }
}

TEST(RecursiveCluster, Errors) {
  EXPECT_THROW(recursive_cluster({}), ClusteringError);
  EXPECT_THROW(recursive_cluster({{"a", basis(2, 0)}, {"b", basis(3, 0)}}), ClusteringError);
  EXPECT_THROW(recursive_cluster({{"a", basis(2, 0)}, {"a", basis(2, 1)}}), ClusteringError);
  EXPECT_THROW(recursive_cluster({{"a", EmbeddingVector({0, 0})}}), ClusteringError);
  ClusterParams p;
  p.split_arity = 1;
  EXPECT_THROW(recursive_cluster(copies(basis(2, 0), 3, "x"), p), ConfigError);
}

TEST(ClusterParams, Validation) {
  ClusterParams p;
  EXPECT_NO_THROW(p.validate());
  p.density_threshold = -1.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p.density_threshold = 1.0;
  EXPECT_NO_THROW(p.validate());
  p.density_threshold = 1.01;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.min_size = 0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.max_depth = 0;
  EXPECT_THROW(p.validate(), ConfigError);
  EXPECT_EQ(parse_density_mode("min"), DensityMode::min_pairwise);
  EXPECT_THROW(parse_density_mode("median"), ConfigError);
}

TEST(BuildDictionary, Examples) {
  TopicCluster c;
  c.members = {{"fast charger", basis(2, 0)}, {"charger", basis(2, 0)}};
  const auto d = build_dictionary(std::vector<TopicCluster>{c});
  EXPECT_EQ(d.words, (std::vector<std::string>{"charger", "fast"}));
  EXPECT_EQ(d.vocabulary_size(), 2u);
  EXPECT_EQ(d.topic_count, 1u);
  EXPECT_EQ(d.source, "Keyphrase embedding");

  const auto empty = build_dictionary(std::vector<TopicCluster>{});
  EXPECT_EQ(empty.vocabulary_size(), 0u);
  EXPECT_EQ(empty.topic_count, 0u);

  TopicCluster five;
  for (const char* w : {"a", "b", "c", "d", "e"}) five.members.push_back({w, basis(2, 0)});
  EXPECT_EQ(build_dictionary(std::vector<TopicCluster>{five}).vocabulary_size(), 5u);
}

TEST(WriteTopics, Format) {
  auto phrases = copies(basis(3, 0), 5, "a");
  phrases.push_back({"lone", basis(3, 1)});
  const auto r = recursive_cluster(phrases);
  std::ostringstream out;
  write_topics(r, out);
  EXPECT_EQ(out.str(),
            "0\t1.000000\taccepted\ta0\n0\t1.000000\taccepted\ta1\n0\t1.000000\taccepted\ta2\n"
            "0\t1.000000\taccepted\ta3\n0\t1.000000\taccepted\ta4\n1\t1.000000\toutlier\tlone\n");
}
