#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "reviewscope/error.hpp"
#include "reviewscope/evaluation.hpp"

using namespace reviewscope;

namespace {

const std::vector<std::string> kVocab{"a", "b", "c"};

std::vector<double> dense(const SparseRow& row, std::size_t n) {
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < row.indices.size(); ++i) out[row.indices[i]] = row.values[i];
  return out;
}

}  // namespace

TEST(Vectorizer, OneHotAndCount) {
  const std::vector<std::string> docs{"a b a", "b c z"};
  const auto oh = Vectorizer::fit(docs, kVocab, VectorizerMode::one_hot);
  EXPECT_EQ(dense(oh.transform("a b a"), 3), (std::vector<double>{1, 1, 0}));
  const auto cnt = Vectorizer::fit(docs, kVocab, VectorizerMode::count);
  EXPECT_EQ(dense(cnt.transform("a b a"), 3), (std::vector<double>{2, 1, 0}));
  EXPECT_EQ(dense(cnt.transform("z z"), 3), (std::vector<double>{0, 0, 0}));
}

TEST(Vectorizer, TfidfHandExample) {
  const std::vector<std::string> docs{"a b a", "b c"};
  const auto v = Vectorizer::fit(docs, kVocab, VectorizerMode::tfidf);
  const double ia = std::log(3.0 / 2.0) + 1.0;
  const double ib = 1.0;
  const double ic = std::log(3.0 / 2.0) + 1.0;
  ASSERT_EQ(v.idf().size(), 3u);
  EXPECT_NEAR(v.idf()[0], ia, 1e-12);
  EXPECT_NEAR(v.idf()[1], ib, 1e-12);
  EXPECT_NEAR(v.idf()[2], ic, 1e-12);
  const auto row = dense(v.transform("a b a"), 3);
  const double norm = std::sqrt(4 * ia * ia + ib * ib);
  EXPECT_NEAR(row[0], 2 * ia / norm, 1e-12);
  EXPECT_NEAR(row[1], ib / norm, 1e-12);
  EXPECT_EQ(row[2], 0.0);
}

TEST(Vectorizer, IdfComesFromFittedDocumentsOnly) {
  const std::vector<std::string> train{"a", "a b"};
  const auto v = Vectorizer::fit(train, kVocab, VectorizerMode::tfidf);
  // c never appears in training: df 0
  EXPECT_NEAR(v.idf()[2], std::log(3.0) + 1.0, 1e-12);
  const auto row = v.transform("c c");
  ASSERT_EQ(row.indices.size(), 1u);
  EXPECT_NEAR(row.values[0], 1.0, 1e-12);
}

TEST(Vectorizer, TfidfRowsAreUnitOrZero) {
  std::mt19937_64 rng(9);
  std::vector<std::string> vocab;
  for (int i = 0; i < 30; ++i) vocab.push_back("w" + std::to_string(i));
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> docs;
    for (int d = 0; d < 20; ++d) {
      std::string doc;
      const int len = static_cast<int>(rng() % 12);
      for (int t = 0; t < len; ++t) doc += "w" + std::to_string(rng() % 40) + " ";
      docs.push_back(doc);
    }
    const auto v = Vectorizer::fit(docs, vocab, VectorizerMode::tfidf);
    for (const auto& doc : docs) {
      const auto row = v.transform(doc);
      if (row.indices.empty()) continue;
      EXPECT_NEAR(row.squared_norm(), 1.0, 1e-12);
      for (double x : row.values) EXPECT_GT(x, 0.0);
      EXPECT_TRUE(std::is_sorted(row.indices.begin(), row.indices.end()));
    }
    for (double idf : v.idf()) EXPECT_GE(idf, 1.0);
  }
}

TEST(Vectorizer, DatasetTransform) {
  const std::vector<std::string> docs{"a", "b c"};
  const std::vector<std::size_t> labels{0, 1};
  const auto ds = vectorize(docs, labels, {"neg", "pos"}, kVocab, VectorizerMode::count);
  EXPECT_EQ(ds.num_features(), 3u);
  EXPECT_EQ(ds.num_classes(), 2u);
  EXPECT_EQ(ds.dense(), (std::vector<std::vector<double>>{{1, 0, 0}, {0, 1, 1}}));
  const std::vector<std::size_t> short_labels{0};
  EXPECT_THROW(vectorize(docs, short_labels, {"neg", "pos"}, kVocab, VectorizerMode::count), EvaluationError);
}

TEST(Vectorizer, Errors) {
  const std::vector<std::string> docs{"a"};
  EXPECT_THROW(Vectorizer::fit(docs, {}, VectorizerMode::tfidf), EvaluationError);
  EXPECT_THROW(Vectorizer::fit(docs, {"a", "a"}, VectorizerMode::tfidf), EvaluationError);
}

TEST(Vectorizer, ModeNames) {
  EXPECT_EQ(parse_vectorizer_modes("tfidf, count,one-hot,count"),
            (std::vector<VectorizerMode>{VectorizerMode::tfidf, VectorizerMode::count, VectorizerMode::one_hot}));
  EXPECT_EQ(to_string(VectorizerMode::one_hot), "one-hot");
  EXPECT_THROW(parse_vectorizer_mode("bm25"), ConfigError);
}

TEST(DocumentTokens, CleansAndDropsDelimiters) {
  EXPECT_EQ(document_tokens("Great Battery! Screen, meh."),
            (std::vector<std::string>{"great", "battery", "screen", "meh"}));
  const auto d = make_dictionary({"battery", "screen"}, 1, "x");
  EXPECT_EQ(filter_document("great battery screen battery", d), "battery screen battery");
}
