#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "reviewscope/clustering.hpp"
#include "reviewscope/evaluation.hpp"
#include "reviewscope/keyphrase.hpp"
#include "reviewscope/sentiment.hpp"
#include "reviewscope/textprep.hpp"

namespace reviewscope {

struct NamedDictionary {
  std::string method;
  std::filesystem::path path;
  std::size_t topic_count = 0;
};

/// Everything a pipeline run needs. Loaded from a `key = value` file whose
/// relative paths resolve against the file's directory; every key can also
/// be set individually with set().
struct PipelineConfig {
  std::filesystem::path corpus;
  std::filesystem::path output_dir;

  // ingest
  std::filesystem::path tokenizer_vocab;  // empty: word tokenizer
  std::size_t min_tokens = 16;
  std::size_t max_tokens = 128;
  std::size_t per_label = 0;  // 0: no sampling
  std::uint64_t seed = 0;

  // clean
  std::filesystem::path cleaning_config;

  // sentiment: exactly one of these
  std::filesystem::path lexicon;
  std::filesystem::path sidecar;
  std::string sentiment_remote;
  std::set<SentimentClass> keep = all_sentiment_classes();

  // extract / cluster
  std::string provider = "test:0";
  std::size_t k = 3;
  ClusterParams cluster;

  // optional benchmark
  std::filesystem::path benchmark_train;
  std::filesystem::path benchmark_test;
  /// External dictionaries compared against the pipeline's own, set with
  /// `dictionary.<method> = <path>` and optionally `topics.<method> = <n>`.
  std::vector<NamedDictionary> extra_dictionaries;
  std::vector<VectorizerMode> benchmark_modes = {VectorizerMode::tfidf, VectorizerMode::count,
                                                 VectorizerMode::one_hot};
  TrainingParams training;

  bool projection = false;

  static PipelineConfig load(const std::filesystem::path& path);

  /// Applies one `key = value` setting; relative paths resolve against
  /// base_dir. Throws ConfigError for unknown keys or bad values.
  void set(const std::string& key, const std::string& value,
           const std::filesystem::path& base_dir = {});

  /// Throws ConfigError when a referenced input is missing or a parameter is
  /// out of range.
  void validate() const;

  /// Canonical `key = value` dump, keys sorted.
  std::map<std::string, std::string> echo() const;

  /// Sentiment binding string for make_scorer.
  std::string scorer_binding() const;
};

/// Ordered `key = value` counters written to manifest.txt.
using StageCounts = std::vector<std::pair<std::string, std::string>>;

// Stage entry points. Each reads the previous stage's artifact and writes its
// own, so running them in sequence reproduces run_pipeline's output. Errors
// are rethrown as StageError carrying the stage name.

struct IngestOptions {
  std::size_t min_tokens = 16;
  std::size_t max_tokens = 128;
  std::size_t per_label = 0;
  std::uint64_t seed = 0;
  std::filesystem::path tokenizer_vocab;
};
StageCounts ingest_stage(const std::filesystem::path& input, const std::filesystem::path& output,
                         const IngestOptions& options);

StageCounts clean_stage(const std::filesystem::path& reviews, const std::filesystem::path& sentences,
                        const CleaningConfig& config);

StageCounts sentiment_stage(const std::filesystem::path& sentences, const std::filesystem::path& output,
                            const SentimentScorer& scorer, const std::set<SentimentClass>& keep);

StageCounts extract_stage(const std::filesystem::path& scored_sentences,
                          const std::filesystem::path& keyphrases, const EmbeddingProvider& provider,
                          std::size_t k);

/// When vectors_out is non-empty the distinct phrase vectors are also saved
/// there as an embedding store.
StageCounts cluster_stage(const std::filesystem::path& keyphrases, const std::filesystem::path& topics,
                          const std::filesystem::path& dictionary, const EmbeddingProvider& provider,
                          const ClusterParams& params, const std::filesystem::path& vectors_out = {});

StageCounts evaluate_stage(const std::filesystem::path& train, const std::filesystem::path& test,
                           const std::vector<NamedDictionary>& dictionaries,
                           const std::vector<VectorizerMode>& modes, const TrainingParams& params,
                           const std::filesystem::path& report_csv,
                           const std::filesystem::path& report_table);

/// Writes `key,x,y` rows (with header) for every store entry.
StageCounts project_stage(const std::filesystem::path& store, const std::filesystem::path& output);

/// Artifact names inside the output directory.
namespace artifacts {
inline constexpr const char* kReviews = "reviews.jsonl";
inline constexpr const char* kSentences = "sentences.tsv";
inline constexpr const char* kScored = "sentiment.tsv";
inline constexpr const char* kKeyphrases = "keyphrases.tsv";
inline constexpr const char* kTopics = "topics.tsv";
inline constexpr const char* kDictionary = "dictionary.txt";
inline constexpr const char* kReportCsv = "report.csv";
inline constexpr const char* kReportTable = "report_table.csv";
inline constexpr const char* kProjectionStore = "phrases.embs";
inline constexpr const char* kProjection = "projection.csv";
inline constexpr const char* kManifest = "manifest.txt";
}  // namespace artifacts

struct PipelineResult {
  StageCounts counts;
  std::filesystem::path manifest;
};

/// ingest -> clean/split -> score/gate -> extract -> cluster -> dictionary
/// (-> benchmark) (-> projection), writing each artifact and a manifest.
/// The manifest is written even when a stage fails, recording the failure.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace reviewscope
