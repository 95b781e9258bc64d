#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "reviewscope/embedding.hpp"
#include "reviewscope/textprep.hpp"

namespace reviewscope {

struct Keyphrase {
  std::string review_id;
  std::size_t sentence_index = 0;
  std::string text;
  int n = 1;
  double similarity = 0.0;

  bool operator==(const Keyphrase&) const = default;
};

/// All contiguous n-grams for n = 1..min(max_n, |tokens|), in (n, position)
/// order, repeats kept. Throws CandidateError for empty tokens or max_n < 1.
std::vector<std::string> generate_candidates(std::span<const std::string> tokens, int max_n = 3);

struct Candidate {
  std::string text;
  int n = 1;
  std::size_t position = 0;  // first occurrence
};

/// generate_candidates de-duplicated by text, keeping the first position.
std::vector<Candidate> distinct_candidates(std::span<const std::string> tokens, int max_n = 3);

struct ExtractOptions {
  std::size_t k = 3;
  int max_n = 3;
  /// Texts sent to the provider per call; batches span sentences.
  std::size_t batch_size = 512;
};

/// Scores every distinct candidate by cosine similarity to the sentence
/// embedding and keeps the best k, ordered by (-similarity, n, position, text).
std::vector<Keyphrase> extract_keyphrases(const Sentence& sentence,
                                          const EmbeddingProvider& provider,
                                          const ExtractOptions& options = {});

/// Same result per sentence as extract_keyphrases, with provider calls
/// batched and texts shared across sentences embedded once.
std::vector<std::vector<Keyphrase>> extract_keyphrases(std::span<const Sentence> sentences,
                                                       const EmbeddingProvider& provider,
                                                       const ExtractOptions& options = {});

/// Baseline: drop stopwords, split what remains into runs that were
/// contiguous in the sentence, emit each run's n-grams up to max_n.
std::vector<std::string> ngram_baseline_extract(const Sentence& sentence,
                                                const std::unordered_set<std::string>& stopwords,
                                                int max_n = 3);

/// One word per line; '#' starts a comment line.
std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path);

/// `review_id<TAB>sentence_index<TAB>phrase<TAB>n<TAB>similarity`, 6 decimals.
void write_keyphrases(const std::vector<Keyphrase>& phrases, std::ostream& out);
std::vector<Keyphrase> parse_keyphrases(std::istream& in);

}  // namespace reviewscope
