#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "reviewscope/tokenizer.hpp"

namespace reviewscope {

struct Review {
  std::string id;
  std::string product_id;
  int rating = 0;  // 1..5
  std::string text;

  std::string label() const { return std::to_string(rating); }
  bool operator==(const Review&) const = default;
};

struct LabeledDocument {
  std::string id;
  std::string label;
  std::string text;

  bool operator==(const LabeledDocument&) const = default;
};

/// Ordered documents plus the sorted set of labels they use.
template <typename Document>
struct Corpus {
  std::vector<Document> documents;
  std::vector<std::string> label_set;

  std::size_t size() const { return documents.size(); }
  bool empty() const { return documents.empty(); }
};

using ReviewCorpus = Corpus<Review>;
using LabeledCorpus = Corpus<LabeledDocument>;

inline std::string label_of(const Review& r) { return r.label(); }
inline const std::string& label_of(const LabeledDocument& d) { return d.label; }

struct ReviewLoadResult {
  ReviewCorpus corpus;
  std::size_t skipped = 0;
  std::vector<std::string> warnings;
};

/// Reads one JSON record per line (`reviewText`, `overall`, `asin`; optional
/// `id`). Records without an `id` get "r<line>". Malformed lines, ratings
/// that round outside 1..5, blank texts and duplicate ids are skipped and
/// counted. Throws LoadError when no record survives.
ReviewLoadResult parse_reviews(std::istream& in);
ReviewLoadResult load_reviews(const std::filesystem::path& path);

/// Inverse of parse_reviews; always writes the `id` field.
void write_reviews(const ReviewCorpus& corpus, std::ostream& out);
void write_reviews(const ReviewCorpus& corpus, const std::filesystem::path& path);

/// `label<TAB>text` lines; ids are "d<line>". Throws ValidationError on a
/// line without a tab or with an empty label, LoadError when empty.
LabeledCorpus parse_labeled(std::istream& in);
LabeledCorpus load_labeled(const std::filesystem::path& path);

/// Half-up rounding of a star rating; nullopt outside 1..5.
std::optional<int> round_rating(double overall);

/// Keeps documents whose token count lies in [min_tokens, max_tokens].
template <typename Document>
Corpus<Document> filter_by_token_length(const Corpus<Document>& corpus, const Tokenizer& tokenizer,
                                        std::size_t min_tokens = 16, std::size_t max_tokens = 128);

/// Draws exactly per_label documents for every label with a seeded shuffle.
/// Output keeps corpus order. Throws SamplingError naming the first label
/// that has too few documents.
template <typename Document>
Corpus<Document> stratified_sample(const Corpus<Document>& corpus, std::size_t per_label,
                                   std::uint64_t seed);

/// Sorted unique labels of the documents.
template <typename Document>
std::vector<std::string> collect_labels(const std::vector<Document>& documents);

}  // namespace reviewscope
