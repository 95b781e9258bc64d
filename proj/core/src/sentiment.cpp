#include "reviewscope/sentiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "reviewscope/config.hpp"
#include "reviewscope/error.hpp"

namespace reviewscope {

SentimentScore::SentimentScore(double value) : value_(value) {
  if (!(value >= 1.0 && value <= 5.0)) {
    std::ostringstream ss;
    ss << "sentiment score " << value << " outside [1, 5]";
    throw ValidationError(ss.str(), 0);
  }
}

std::string_view to_string(SentimentClass c) {
  switch (c) {
    case SentimentClass::negative:
      return "negative";
    case SentimentClass::neutral:
      return "neutral";
    case SentimentClass::positive:
      return "positive";
  }
  return "neutral";
}

SentimentClass parse_sentiment_class(std::string_view name) {
  if (name == "negative") return SentimentClass::negative;
  if (name == "neutral") return SentimentClass::neutral;
  if (name == "positive") return SentimentClass::positive;
  throw ConfigError("unknown sentiment class \"" + std::string(name) + "\"");
}

std::set<SentimentClass> parse_keep_set(std::string_view list) {
  std::set<SentimentClass> keep;
  const std::string trimmed = trim(list);
  if (trimmed.empty() || trimmed == "none") return keep;
  for (const std::string& part : split(trimmed, ',')) keep.insert(parse_sentiment_class(trim(part)));
  return keep;
}

std::string format_keep_set(const std::set<SentimentClass>& keep) {
  if (keep.empty()) return "none";
  std::vector<std::string> names;
  for (SentimentClass c : keep) names.emplace_back(to_string(c));
  return join(names, ",");
}

std::set<SentimentClass> all_sentiment_classes() {
  return {SentimentClass::negative, SentimentClass::neutral, SentimentClass::positive};
}

SentimentClass classify_sentiment(SentimentScore score) {
  if (score.value() < 2.0) return SentimentClass::negative;
  if (score.value() > 4.0) return SentimentClass::positive;
  return SentimentClass::neutral;
}

ScoreBands::ScoreBands(std::vector<double> cuts, std::vector<std::string> labels)
    : cuts_(std::move(cuts)), labels_(std::move(labels)) {
  if (cuts_.empty()) throw ConfigError("score bands need at least one cut point");
  if (labels_.size() != cuts_.size() + 1) throw ConfigError("score bands need one more label than cut points");
  if (!std::is_sorted(cuts_.begin(), cuts_.end()) ||
      std::adjacent_find(cuts_.begin(), cuts_.end()) != cuts_.end()) {
    throw ConfigError("score band cut points must be strictly increasing");
  }
}

std::size_t ScoreBands::band(SentimentScore score) const {
  const double v = score.value();
  if (v < cuts_.front()) return 0;
  if (v > cuts_.back()) return cuts_.size();
  for (std::size_t i = 1; i + 1 < cuts_.size(); ++i) {
    if (v < cuts_[i]) return i;
  }
  return cuts_.size() - (cuts_.size() > 1 ? 1 : 0);
}

Lexicon parse_lexicon(std::istream& in) {
  Lexicon lexicon;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 2) throw ValidationError("expected word<TAB>valence", line_no);
    double valence = 0;
    try {
      valence = parse_real("valence", trim(fields[1]));
    } catch (const ConfigError&) {
      throw ValidationError("bad valence \"" + fields[1] + "\"", line_no);
    }
    if (!(valence >= -1.0 && valence <= 1.0)) throw ValidationError("valence outside [-1, 1]", line_no);
    lexicon[trim(fields[0])] = valence;
  }
  return lexicon;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open lexicon " + path.string());
  return parse_lexicon(in);
}

SentimentScore score_sentence_lexicon(const Sentence& sentence, const Lexicon& lexicon) {
  double sum = 0;
  std::size_t hits = 0;
  for (const std::string& token : sentence.tokens) {
    if (auto it = lexicon.find(token); it != lexicon.end()) {
      sum += it->second;
      ++hits;
    }
  }
  const double mean = hits == 0 ? 0.0 : sum / static_cast<double>(hits);
  return SentimentScore(std::clamp(3.0 + 2.0 * mean, 1.0, 5.0));
}

std::string to_string(const SentenceKey& key) {
  return "(" + key.review_id + ", " + std::to_string(key.index) + ")";
}

SidecarScores parse_sidecar_scores(std::istream& in) {
  SidecarScores scores;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 3) throw ValidationError("expected review_id<TAB>index<TAB>score", line_no);
    long long index = 0;
    double value = 0;
    try {
      index = parse_integer("index", trim(fields[1]));
      value = parse_real("score", trim(fields[2]));
    } catch (const ConfigError& e) {
      throw ValidationError(e.what(), line_no);
    }
    if (index < 0) throw ValidationError("negative sentence index", line_no);
    if (!(value >= 1.0 && value <= 5.0)) throw ValidationError("score " + fields[2] + " outside [1, 5]", line_no);
    SentenceKey key{fields[0], static_cast<std::size_t>(index)};
    if (!scores.emplace(key, SentimentScore(value)).second) {
      throw ValidationError("duplicate key " + to_string(key), line_no);
    }
  }
  return scores;
}

SidecarScores load_sidecar_scores(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open sidecar " + path.string());
  return parse_sidecar_scores(in);
}

std::vector<SentimentScore> LexiconScorer::score(std::span<const Sentence> sentences) const {
  std::vector<SentimentScore> out;
  out.reserve(sentences.size());
  for (const Sentence& s : sentences) out.push_back(score_sentence_lexicon(s, lexicon_));
  return out;
}

std::vector<SentimentScore> SidecarScorer::score(std::span<const Sentence> sentences) const {
  std::vector<SentimentScore> out;
  out.reserve(sentences.size());
  for (const Sentence& s : sentences) {
    const SentenceKey key{s.review_id, s.index};
    auto it = scores_.find(key);
    if (it == scores_.end()) throw GatingError("sidecar has no score for sentence " + to_string(key));
    out.push_back(it->second);
  }
  return out;
}

std::unique_ptr<SentimentScorer> make_scorer(std::string_view binding) {
  const auto colon = binding.find(':');
  const std::string kind(binding.substr(0, colon));
  const std::string arg = colon == std::string_view::npos ? "" : std::string(binding.substr(colon + 1));
  if (kind == "lexicon" && !arg.empty()) return std::make_unique<LexiconScorer>(load_lexicon(arg));
  if (kind == "sidecar" && !arg.empty()) return std::make_unique<SidecarScorer>(load_sidecar_scores(arg));
  if (kind == "remote" && !arg.empty()) return std::make_unique<RemoteScorer>(arg);
  throw ConfigError("scorer must be lexicon:<path>, sidecar:<path> or remote:<url>, got \"" +
                    std::string(binding) + "\"");
}

std::vector<ScoredSentence> gate_sentences(std::span<const Sentence> sentences, const SentimentScorer& scorer,
                                           const std::set<SentimentClass>& keep) {
  const std::vector<SentimentScore> scores = scorer.score(sentences);
  if (scores.size() != sentences.size()) throw GatingError("scorer returned a misaligned score list");
  std::vector<ScoredSentence> out;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const SentimentClass c = classify_sentiment(scores[i]);
    if (keep.contains(c)) out.push_back(ScoredSentence{sentences[i], scores[i].value(), c});
  }
  return out;
}

void write_scored_sentences(const std::vector<ScoredSentence>& sentences, std::ostream& out) {
  std::ostringstream line;
  for (const ScoredSentence& s : sentences) {
    line.str({});
    line << s.sentence.review_id << '\t' << s.sentence.index << '\t' << std::fixed << std::setprecision(6)
         << s.score << '\t' << to_string(s.sentiment) << '\t' << s.sentence.text << '\n';
    out << line.str();
  }
}

std::vector<ScoredSentence> parse_scored_sentences(std::istream& in) {
  std::vector<ScoredSentence> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 5) throw ValidationError("expected review_id<TAB>index<TAB>score<TAB>class<TAB>text", line_no);
    try {
      const long long index = parse_integer("index", fields[1]);
      if (index < 0) throw ValidationError("negative sentence index", line_no);
      const double score = parse_real("score", fields[2]);
      if (!(score >= 1.0 && score <= 5.0)) throw ValidationError("score " + fields[2] + " outside [1, 5]", line_no);
      out.push_back(ScoredSentence{make_sentence(fields[0], static_cast<std::size_t>(index), fields[4]), score,
                                   parse_sentiment_class(fields[3])});
    } catch (const ValidationError&) {
      throw;
    } catch (const Error& e) {
      throw ValidationError(e.what(), line_no);
    }
  }
  return out;
}

}  // namespace reviewscope
