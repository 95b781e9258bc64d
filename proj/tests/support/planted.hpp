#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "reviewscope/clustering.hpp"
#include "reviewscope/corpus.hpp"
#include "reviewscope/dictionary.hpp"
#include "reviewscope/embedding.hpp"
#include "reviewscope/evaluation.hpp"
#include "reviewscope/textprep.hpp"

namespace reviewscope::testkit {

struct PlantedOptions {
  std::size_t documents = 600;
  std::size_t topics = 6;
  std::size_t words_per_topic = 8;
  std::size_t noise_words = 2000;
  /// Topic sentences mix topic words with a few noise words; filler
  /// sentences hold noise words only.
  std::size_t topic_sentences = 1;
  std::size_t topic_tokens_per_sentence = 3;
  std::size_t noise_tokens_per_topic_sentence = 1;
  std::size_t filler_sentences = 2;
  std::size_t filler_tokens = 5;
  double train_fraction = 2.0 / 3.0;
  std::uint64_t seed = 0;
};

/// Synthetic documents: each belongs to one topic; its topic sentences draw
/// from that topic's words and every sentence draws uniformly from the noise
/// vocabulary. Sentence order within a document is shuffled.
struct PlantedCorpus {
  std::vector<std::vector<std::string>> topic_words;
  std::vector<std::string> noise_words;
  /// topic word -> group name, for TestEmbedderOptions::token_groups
  std::map<std::string, std::string> token_groups;
  LabeledCorpus train;
  LabeledCorpus test;
};

PlantedCorpus make_planted_corpus(const PlantedOptions& options);

/// size words drawn without replacement from the distinct training tokens.
TopicDictionary random_dictionary(const LabeledCorpus& train, std::size_t size, std::uint64_t seed);

struct PlantedOutcome {
  double coverage = 0;  // fraction of planted topic words in the pipeline dictionary
  double pipeline_accuracy = 0;
  double random_accuracy = 0;
  std::size_t phrases = 0;
  std::size_t accepted_clusters = 0;
  std::size_t dictionary_size = 0;
};

/// Clean, split, extract (test embedder with topic words grouped), cluster and
/// build the dictionary from the training side, then compare its TF-IDF
/// accuracy against a size-matched random dictionary.
PlantedOutcome run_planted_experiment(const PlantedOptions& options, std::size_t dim,
                                      const ClusterParams& params = {}, const TrainingParams& training = {});

}  // namespace reviewscope::testkit
