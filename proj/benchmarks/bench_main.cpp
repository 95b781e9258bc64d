#include <benchmark/benchmark.h>

#include <random>

#include "reviewscope/clustering.hpp"
#include "reviewscope/embedding.hpp"
#include "reviewscope/evaluation.hpp"
#include "reviewscope/keyphrase.hpp"

using namespace reviewscope;

namespace {

std::vector<EmbeddingVector> random_vectors(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<EmbeddingVector> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(dim);
    for (double& x : v) x = g(rng);
    out.emplace_back(std::move(v));
  }
  return out;
}

void BM_Cosine(benchmark::State& state) {
  const auto v = random_vectors(2, static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(cosine_similarity(v[0], v[1]));
}
BENCHMARK(BM_Cosine)->Arg(64)->Arg(384)->Arg(768);

void BM_AgglomerativeSplit(benchmark::State& state) {
  const auto v = random_vectors(static_cast<std::size_t>(state.range(0)), 64, 2);
  for (auto _ : state) benchmark::DoNotOptimize(agglomerative_split(v, 2));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AgglomerativeSplit)->RangeMultiplier(2)->Range(64, 1024)->Complexity();

void BM_RecursiveCluster(benchmark::State& state) {
  const auto v = random_vectors(static_cast<std::size_t>(state.range(0)), 64, 3);
  std::vector<PhraseVector> phrases;
  for (std::size_t i = 0; i < v.size(); ++i) phrases.push_back({"p" + std::to_string(i), v[i]});
  for (auto _ : state) benchmark::DoNotOptimize(recursive_cluster(phrases));
}
BENCHMARK(BM_RecursiveCluster)->Arg(200)->Arg(800);

void BM_ExtractKeyphrases(benchmark::State& state) {
  TestEmbedderOptions options;
  options.dim = 384;
  const TestEmbedder embedder(options);
  std::mt19937_64 rng(4);
  std::vector<Sentence> sentences;
  for (int i = 0; i < state.range(0); ++i) {
    std::string text;
    for (int t = 0; t < 12; ++t) text += (t ? " w" : "w") + std::to_string(rng() % 500);
    sentences.push_back(make_sentence("r", static_cast<std::size_t>(i), text));
  }
  for (auto _ : state) benchmark::DoNotOptimize(extract_keyphrases(std::span<const Sentence>(sentences), embedder));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ExtractKeyphrases)->Arg(100)->Arg(1000);

void BM_TrainClassifier(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::vector<std::string> vocab, docs;
  std::vector<std::size_t> labels;
  for (int i = 0; i < 300; ++i) vocab.push_back("w" + std::to_string(i));
  for (int d = 0; d < state.range(0); ++d) {
    std::string doc;
    for (int t = 0; t < 30; ++t) doc += "w" + std::to_string(rng() % 300) + " ";
    docs.push_back(doc);
    labels.push_back(static_cast<std::size_t>(d % 2));
  }
  const auto data = vectorize(docs, labels, {"neg", "pos"}, vocab, VectorizerMode::tfidf);
  TrainingParams params;
  params.epochs = 100;
  for (auto _ : state) benchmark::DoNotOptimize(train_classifier(data, params));
}
BENCHMARK(BM_TrainClassifier)->Arg(500)->Arg(2000);

}  // namespace
BENCHMARK_MAIN();
