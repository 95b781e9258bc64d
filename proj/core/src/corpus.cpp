#include "reviewscope/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "reviewscope/config.hpp"
#include "reviewscope/error.hpp"
#include "reviewscope/random.hpp"

namespace reviewscope {

using nlohmann::json;

std::optional<int> round_rating(double overall) {
  if (!std::isfinite(overall)) return std::nullopt;
  const double rounded = std::floor(overall + 0.5);
  if (rounded < 1.0 || rounded > 5.0) return std::nullopt;
  return static_cast<int>(rounded);
}

template <typename Document>
std::vector<std::string> collect_labels(const std::vector<Document>& documents) {
  std::set<std::string> labels;
  for (const auto& d : documents) labels.insert(label_of(d));
  return {labels.begin(), labels.end()};
}

ReviewLoadResult parse_reviews(std::istream& in) {
  ReviewLoadResult result;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  auto skip = [&](const std::string& why) {
    ++result.skipped;
    result.warnings.push_back("line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (record.is_discarded() || !record.is_object()) {
      skip("not a JSON object");
      continue;
    }
    const auto text_it = record.find("reviewText");
    const auto overall_it = record.find("overall");
    const auto asin_it = record.find("asin");
    if (text_it == record.end() || !text_it->is_string() || overall_it == record.end() ||
        !overall_it->is_number() || asin_it == record.end() || !asin_it->is_string()) {
      skip("missing or mistyped reviewText/overall/asin");
      continue;
    }
    const auto rating = round_rating(overall_it->get<double>());
    if (!rating) {
      skip("rating outside 1..5");
      continue;
    }
    std::string text = trim(text_it->get<std::string>());
    if (text.empty()) {
      skip("empty review text");
      continue;
    }
    std::string id = "r" + std::to_string(line_no);
    if (const auto id_it = record.find("id"); id_it != record.end()) {
      if (!id_it->is_string() || id_it->get<std::string>().empty()) {
        skip("id is not a non-empty string");
        continue;
      }
      id = id_it->get<std::string>();
    }
    if (!seen_ids.insert(id).second) {
      skip("duplicate id " + id);
      continue;
    }
    result.corpus.documents.push_back(
        Review{std::move(id), asin_it->get<std::string>(), *rating, std::move(text)});
  }
  if (result.corpus.documents.empty()) throw LoadError("no records");
  result.corpus.label_set = collect_labels(result.corpus.documents);
  return result;
}

ReviewLoadResult load_reviews(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path.string());
  try {
    return parse_reviews(in);
  } catch (const LoadError& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
}

void write_reviews(const ReviewCorpus& corpus, std::ostream& out) {
  for (const Review& r : corpus.documents) {
    json record;
    record["id"] = r.id;
    record["asin"] = r.product_id;
    record["overall"] = static_cast<double>(r.rating);
    record["reviewText"] = r.text;
    out << record.dump() << '\n';
  }
}

void write_reviews(const ReviewCorpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot write " + path.string());
  write_reviews(corpus, out);
}

LabeledCorpus parse_labeled(std::istream& in) {
  LabeledCorpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) throw ValidationError("expected label<TAB>text", line_no);
    std::string label = trim(std::string_view(line).substr(0, tab));
    if (label.empty()) throw ValidationError("empty label", line_no);
    corpus.documents.push_back(
        LabeledDocument{"d" + std::to_string(line_no), std::move(label), line.substr(tab + 1)});
  }
  if (corpus.documents.empty()) throw LoadError("no records");
  corpus.label_set = collect_labels(corpus.documents);
  return corpus;
}

LabeledCorpus load_labeled(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path.string());
  try {
    return parse_labeled(in);
  } catch (const LoadError& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
}

template <typename Document>
Corpus<Document> filter_by_token_length(const Corpus<Document>& corpus, const Tokenizer& tokenizer,
                                        std::size_t min_tokens, std::size_t max_tokens) {
  if (min_tokens < 1 || min_tokens > max_tokens) {
    throw ConfigError("token bounds must satisfy 1 <= min_tokens <= max_tokens");
  }
  Corpus<Document> out;
  out.label_set = corpus.label_set;
  for (const auto& d : corpus.documents) {
    const std::size_t n = tokenizer.tokenize(d.text).size();
    if (n >= min_tokens && n <= max_tokens) out.documents.push_back(d);
  }
  return out;
}

template <typename Document>
Corpus<Document> stratified_sample(const Corpus<Document>& corpus, std::size_t per_label,
                                   std::uint64_t seed) {
  std::map<std::string, std::vector<std::size_t>> by_label;
  for (const auto& label : corpus.label_set) by_label[label];
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
    by_label[label_of(corpus.documents[i])].push_back(i);
  }
  for (const auto& [label, indices] : by_label) {
    if (indices.size() < per_label) {
      throw SamplingError("label \"" + label + "\" has " + std::to_string(indices.size()) +
                          " documents, need " + std::to_string(per_label));
    }
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> chosen;
  for (auto& [label, indices] : by_label) {
    fisher_yates_shuffle(std::span<std::size_t>(indices), rng);
    chosen.insert(chosen.end(), indices.begin(), indices.begin() + static_cast<std::ptrdiff_t>(per_label));
  }
  std::sort(chosen.begin(), chosen.end());
  Corpus<Document> out;
  out.label_set = corpus.label_set;
  out.documents.reserve(chosen.size());
  for (std::size_t i : chosen) out.documents.push_back(corpus.documents[i]);
  return out;
}

template std::vector<std::string> collect_labels(const std::vector<Review>&);
template std::vector<std::string> collect_labels(const std::vector<LabeledDocument>&);
template ReviewCorpus filter_by_token_length(const ReviewCorpus&, const Tokenizer&, std::size_t, std::size_t);
template LabeledCorpus filter_by_token_length(const LabeledCorpus&, const Tokenizer&, std::size_t, std::size_t);
template ReviewCorpus stratified_sample(const ReviewCorpus&, std::size_t, std::uint64_t);
template LabeledCorpus stratified_sample(const LabeledCorpus&, std::size_t, std::uint64_t);

}  // namespace reviewscope
