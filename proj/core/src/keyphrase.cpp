#include "reviewscope/keyphrase.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>

#include "reviewscope/config.hpp"
#include "reviewscope/error.hpp"

namespace reviewscope {

namespace {

std::string join_range(std::span<const std::string> tokens, std::size_t start, std::size_t n) {
  std::string out = tokens[start];
  for (std::size_t i = 1; i < n; ++i) {
    out += ' ';
    out += tokens[start + i];
  }
  return out;
}

struct Scored {
  const Candidate* candidate;
  double similarity;
};

bool ranks_before(const Scored& a, const Scored& b) {
  if (a.similarity != b.similarity) return a.similarity > b.similarity;
  if (a.candidate->n != b.candidate->n) return a.candidate->n < b.candidate->n;
  if (a.candidate->position != b.candidate->position) return a.candidate->position < b.candidate->position;
  return a.candidate->text < b.candidate->text;
}

std::vector<Keyphrase> select_top(const Sentence& sentence, const std::vector<Candidate>& candidates,
                                  const EmbeddingVector& sentence_vector,
                                  const std::vector<const EmbeddingVector*>& candidate_vectors, std::size_t k) {
  std::vector<Scored> scored;
  scored.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    scored.push_back({&candidates[i], cosine_similarity(*candidate_vectors[i], sentence_vector)});
  }
  const std::size_t keep = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(), ranks_before);
  std::vector<Keyphrase> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    out.push_back(Keyphrase{sentence.review_id, sentence.index, scored[i].candidate->text, scored[i].candidate->n,
                            scored[i].similarity});
  }
  return out;
}

}  // namespace

std::vector<std::string> generate_candidates(std::span<const std::string> tokens, int max_n) {
  if (tokens.empty()) throw CandidateError("cannot generate candidates from an empty token list");
  if (max_n < 1) throw CandidateError("max_n must be >= 1");
  std::vector<std::string> out;
  const std::size_t top = std::min<std::size_t>(static_cast<std::size_t>(max_n), tokens.size());
  for (std::size_t n = 1; n <= top; ++n) {
    for (std::size_t pos = 0; pos + n <= tokens.size(); ++pos) out.push_back(join_range(tokens, pos, n));
  }
  return out;
}

std::vector<Candidate> distinct_candidates(std::span<const std::string> tokens, int max_n) {
  if (tokens.empty()) throw CandidateError("cannot generate candidates from an empty token list");
  if (max_n < 1) throw CandidateError("max_n must be >= 1");
  std::vector<Candidate> out;
  std::unordered_map<std::string, std::size_t> seen;
  const std::size_t top = std::min<std::size_t>(static_cast<std::size_t>(max_n), tokens.size());
  for (std::size_t n = 1; n <= top; ++n) {
    for (std::size_t pos = 0; pos + n <= tokens.size(); ++pos) {
      std::string text = join_range(tokens, pos, n);
      if (seen.emplace(text, out.size()).second) {
        out.push_back(Candidate{std::move(text), static_cast<int>(n), pos});
      }
    }
  }
  return out;
}

std::vector<Keyphrase> extract_keyphrases(const Sentence& sentence, const EmbeddingProvider& provider,
                                          const ExtractOptions& options) {
  return extract_keyphrases(std::span<const Sentence>(&sentence, 1), provider, options).front();
}

std::vector<std::vector<Keyphrase>> extract_keyphrases(std::span<const Sentence> sentences,
                                                       const EmbeddingProvider& provider,
                                                       const ExtractOptions& options) {
  // Every distinct text (sentences and candidates) is embedded exactly once.
  std::vector<std::string> texts;
  std::unordered_map<std::string, std::size_t> text_index;
  auto intern = [&](const std::string& t) {
    auto [it, inserted] = text_index.emplace(t, texts.size());
    if (inserted) texts.push_back(t);
    return it->second;
  };

  std::vector<std::vector<Candidate>> candidates;
  candidates.reserve(sentences.size());
  std::vector<std::size_t> sentence_slots;
  std::vector<std::vector<std::size_t>> candidate_slots;
  for (const Sentence& s : sentences) {
    if (s.tokens.empty()) {
      throw CandidateError("sentence " + s.review_id + "/" + std::to_string(s.index) + " has no tokens");
    }
    sentence_slots.push_back(intern(s.text));
    candidates.push_back(distinct_candidates(s.tokens, options.max_n));
    std::vector<std::size_t> slots;
    slots.reserve(candidates.back().size());
    for (const Candidate& c : candidates.back()) slots.push_back(intern(c.text));
    candidate_slots.push_back(std::move(slots));
  }

  std::vector<EmbeddingVector> vectors;
  vectors.reserve(texts.size());
  const std::size_t step = std::max<std::size_t>(1, options.batch_size);
  for (std::size_t start = 0; start < texts.size(); start += step) {
    const std::span<const std::string> part(texts.data() + start, std::min(step, texts.size() - start));
    std::vector<EmbeddingVector> got = provider.embed(part);
    if (got.size() != part.size()) throw EmbeddingError("provider returned a misaligned vector list");
    for (auto& v : got) vectors.push_back(std::move(v));
  }

  std::vector<std::vector<Keyphrase>> out;
  out.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    std::vector<const EmbeddingVector*> cv;
    cv.reserve(candidate_slots[i].size());
    for (std::size_t slot : candidate_slots[i]) cv.push_back(&vectors[slot]);
    try {
      out.push_back(select_top(sentences[i], candidates[i], vectors[sentence_slots[i]], cv, options.k));
    } catch (const SimilarityError& e) {
      throw SimilarityError("sentence \"" + sentences[i].text + "\": " + e.what());
    }
  }
  return out;
}

std::vector<std::string> ngram_baseline_extract(const Sentence& sentence,
                                                const std::unordered_set<std::string>& stopwords, int max_n) {
  if (max_n < 1) throw CandidateError("max_n must be >= 1");
  std::vector<std::string> out;
  std::vector<std::string> run;
  auto flush = [&] {
    if (!run.empty()) {
      for (auto& phrase : generate_candidates(run, max_n)) out.push_back(std::move(phrase));
    }
    run.clear();
  };
  for (const std::string& token : sentence.tokens) {
    if (stopwords.contains(token)) {
      flush();
    } else {
      run.push_back(token);
    }
  }
  flush();
  return out;
}

std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open stopword list " + path.string());
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    std::string w = trim(line);
    if (!w.empty() && w.front() != '#') words.insert(std::move(w));
  }
  return words;
}

void write_keyphrases(const std::vector<Keyphrase>& phrases, std::ostream& out) {
  std::ostringstream line;
  line << std::fixed << std::setprecision(6);
  for (const Keyphrase& k : phrases) {
    line.str({});
    line << k.review_id << '\t' << k.sentence_index << '\t' << k.text << '\t' << k.n << '\t' << k.similarity << '\n';
    out << line.str();
  }
}

std::vector<Keyphrase> parse_keyphrases(std::istream& in) {
  std::vector<Keyphrase> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 5) throw ValidationError("expected 5 tab-separated keyphrase fields", line_no);
    try {
      const long long index = parse_integer("sentence_index", fields[1]);
      const long long n = parse_integer("n", fields[3]);
      const double sim = parse_real("similarity", fields[4]);
      if (index < 0 || n < 1 || fields[2].empty()) throw ValidationError("invalid keyphrase fields", line_no);
      if (static_cast<std::size_t>(n) != split_whitespace(fields[2]).size()) {
        throw ValidationError("n does not match the phrase's token count", line_no);
      }
      if (!(sim >= -1.0 && sim <= 1.0)) throw ValidationError("similarity outside [-1, 1]", line_no);
      out.push_back(Keyphrase{fields[0], static_cast<std::size_t>(index), fields[2], static_cast<int>(n), sim});
    } catch (const ConfigError& e) {
      throw ValidationError(e.what(), line_no);
    }
  }
  return out;
}

}  // namespace reviewscope
