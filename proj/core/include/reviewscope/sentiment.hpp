#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "reviewscope/remote.hpp"
#include "reviewscope/textprep.hpp"

namespace reviewscope {

/// A sentence sentiment on the 1..5 star scale.
class SentimentScore {
 public:
  /// Throws ValidationError (line 0) outside [1, 5] or for NaN.
  explicit SentimentScore(double value);
  double value() const noexcept { return value_; }
  auto operator<=>(const SentimentScore&) const = default;

 private:
  double value_;
};

enum class SentimentClass { negative, neutral, positive };

std::string_view to_string(SentimentClass c);
/// Throws ConfigError for an unknown name.
SentimentClass parse_sentiment_class(std::string_view name);
/// Comma-separated class names; "none" or an empty string is the empty set.
std::set<SentimentClass> parse_keep_set(std::string_view list);
std::string format_keep_set(const std::set<SentimentClass>& keep);
std::set<SentimentClass> all_sentiment_classes();

/// score < 2 negative, score > 4 positive, otherwise neutral.
SentimentClass classify_sentiment(SentimentScore score);

/// Finer-grained banding over user cut points c_0 < c_1 < ... < c_{n-1}
/// with n + 1 labels: band 0 is score < c_0, the last band is score > c_{n-1},
/// interior bands are [c_{i-1}, c_i) except the last interior band, which is
/// closed. Cuts {2, 4} reproduce classify_sentiment.
class ScoreBands {
 public:
  ScoreBands(std::vector<double> cuts, std::vector<std::string> labels);
  std::size_t band(SentimentScore score) const;
  const std::string& label(SentimentScore score) const { return labels_[band(score)]; }

 private:
  std::vector<double> cuts_;
  std::vector<std::string> labels_;
};

using Lexicon = std::unordered_map<std::string, double>;

/// `word<TAB>valence` lines with valence in [-1, 1].
Lexicon parse_lexicon(std::istream& in);
Lexicon load_lexicon(const std::filesystem::path& path);

/// 3 + 2 * (mean valence of lexicon tokens), clamped to [1, 5]; 3 when no
/// token is in the lexicon.
SentimentScore score_sentence_lexicon(const Sentence& sentence, const Lexicon& lexicon);

struct SentenceKey {
  std::string review_id;
  std::size_t index = 0;
  auto operator<=>(const SentenceKey&) const = default;
};

std::string to_string(const SentenceKey& key);

using SidecarScores = std::map<SentenceKey, SentimentScore>;

/// `review_id<TAB>index<TAB>score` lines. Throws ValidationError with the
/// line number for malformed lines, out-of-range scores and repeated keys.
SidecarScores parse_sidecar_scores(std::istream& in);
SidecarScores load_sidecar_scores(const std::filesystem::path& path);

/// Source of sentence scores. Implementations return one score per input,
/// order-aligned.
class SentimentScorer {
 public:
  virtual ~SentimentScorer() = default;
  virtual std::vector<SentimentScore> score(std::span<const Sentence> sentences) const = 0;
};

class LexiconScorer final : public SentimentScorer {
 public:
  explicit LexiconScorer(Lexicon lexicon) : lexicon_(std::move(lexicon)) {}
  std::vector<SentimentScore> score(std::span<const Sentence> sentences) const override;

 private:
  Lexicon lexicon_;
};

/// Precomputed scores. A sentence without a key is a GatingError.
class SidecarScorer final : public SentimentScorer {
 public:
  explicit SidecarScorer(SidecarScores scores) : scores_(std::move(scores)) {}
  std::vector<SentimentScore> score(std::span<const Sentence> sentences) const override;

 private:
  SidecarScores scores_;
};

/// HTTP POST `<url>/score` with `{"texts": [...]}`, expecting
/// `{"scores": [...]}`. Same retry policy as the remote embedding provider.
class RemoteScorer final : public SentimentScorer {
 public:
  explicit RemoteScorer(std::string base_url, RemoteOptions options = {});
  std::vector<SentimentScore> score(std::span<const Sentence> sentences) const override;

 private:
  std::string base_url_;
  RemoteOptions options_;
};

/// Resolves "lexicon:<path>", "sidecar:<path>" or "remote:<url>".
std::unique_ptr<SentimentScorer> make_scorer(std::string_view binding);

struct ScoredSentence {
  Sentence sentence;
  double score = 3.0;
  SentimentClass sentiment = SentimentClass::neutral;

  bool operator==(const ScoredSentence&) const = default;
};

/// Scores every sentence, then keeps those whose class is in keep.
std::vector<ScoredSentence> gate_sentences(std::span<const Sentence> sentences,
                                           const SentimentScorer& scorer,
                                           const std::set<SentimentClass>& keep);

/// `review_id<TAB>index<TAB>score<TAB>class<TAB>text` lines, score with 6 decimals.
void write_scored_sentences(const std::vector<ScoredSentence>& sentences, std::ostream& out);
std::vector<ScoredSentence> parse_scored_sentences(std::istream& in);

}  // namespace reviewscope
