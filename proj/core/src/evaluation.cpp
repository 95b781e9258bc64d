#include "reviewscope/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "reviewscope/config.hpp"
#include "reviewscope/error.hpp"
#include "reviewscope/textprep.hpp"

namespace reviewscope {

std::vector<std::string> document_tokens(std::string_view text) {
  static const CleaningConfig defaults;
  return split_whitespace(strip_delimiters(clean_text(text, defaults), defaults));
}

std::string filter_document(std::string_view text, const TopicDictionary& dictionary) {
  std::vector<std::string> kept;
  for (auto& t : split_whitespace(text)) {
    if (dictionary.contains(t)) kept.push_back(std::move(t));
  }
  return join(kept, " ");
}

std::string_view to_string(VectorizerMode mode) {
  switch (mode) {
    case VectorizerMode::one_hot:
      return "one-hot";
    case VectorizerMode::count:
      return "count";
    case VectorizerMode::tfidf:
      return "tfidf";
  }
  return "tfidf";
}

VectorizerMode parse_vectorizer_mode(std::string_view name) {
  if (name == "one-hot" || name == "onehot") return VectorizerMode::one_hot;
  if (name == "count") return VectorizerMode::count;
  if (name == "tfidf" || name == "tf-idf") return VectorizerMode::tfidf;
  throw ConfigError("vectorizer must be one-hot, count or tfidf, got \"" + std::string(name) + "\"");
}

std::vector<VectorizerMode> parse_vectorizer_modes(std::string_view list) {
  std::vector<VectorizerMode> modes;
  for (const auto& part : split(list, ',')) {
    const VectorizerMode m = parse_vectorizer_mode(trim(part));
    if (std::find(modes.begin(), modes.end(), m) == modes.end()) modes.push_back(m);
  }
  return modes;
}

double SparseRow::dot(std::span<const double> dense) const {
  double s = 0;
  for (std::size_t i = 0; i < indices.size(); ++i) s += values[i] * dense[indices[i]];
  return s;
}

double SparseRow::squared_norm() const {
  double s = 0;
  for (double v : values) s += v * v;
  return s;
}

std::vector<std::vector<double>> VectorizedDataset::dense() const {
  std::vector<std::vector<double>> out(rows.size(), std::vector<double>(vocabulary.size(), 0.0));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t i = 0; i < rows[r].indices.size(); ++i) out[r][rows[r].indices[i]] = rows[r].values[i];
  }
  return out;
}

namespace {

std::map<std::uint32_t, double> term_counts(std::string_view document,
                                            const std::unordered_map<std::string, std::uint32_t>& index) {
  std::map<std::uint32_t, double> counts;
  for (const auto& t : split_whitespace(document)) {
    if (auto it = index.find(t); it != index.end()) counts[it->second] += 1.0;
  }
  return counts;
}

std::unordered_map<std::string, std::uint32_t> index_of(const std::vector<std::string>& vocabulary) {
  std::unordered_map<std::string, std::uint32_t> index;
  for (std::size_t i = 0; i < vocabulary.size(); ++i) index.emplace(vocabulary[i], static_cast<std::uint32_t>(i));
  return index;
}

}  // namespace

Vectorizer Vectorizer::fit(std::span<const std::string> documents, std::vector<std::string> vocabulary,
                           VectorizerMode mode) {
  if (vocabulary.empty()) throw EvaluationError("vectorizer vocabulary is empty");
  std::set<std::string> unique(vocabulary.begin(), vocabulary.end());
  if (unique.size() != vocabulary.size()) throw EvaluationError("vectorizer vocabulary has duplicates");
  Vectorizer v;
  v.vocabulary_ = std::move(vocabulary);
  v.mode_ = mode;
  const auto index = index_of(v.vocabulary_);
  std::vector<double> df(v.vocabulary_.size(), 0.0);
  for (const auto& doc : documents) {
    for (const auto& [term, count] : term_counts(doc, index)) df[term] += 1.0;
  }
  const double n = static_cast<double>(documents.size());
  v.idf_.resize(df.size());
  for (std::size_t i = 0; i < df.size(); ++i) v.idf_[i] = std::log((1.0 + n) / (1.0 + df[i])) + 1.0;
  return v;
}

SparseRow Vectorizer::transform(std::string_view document) const {
  return make_row(document, index_of(vocabulary_));
}

SparseRow Vectorizer::make_row(std::string_view document,
                               const std::unordered_map<std::string, std::uint32_t>& index) const {
  SparseRow row;
  for (const auto& [term, count] : term_counts(document, index)) {
    row.indices.push_back(term);
    switch (mode_) {
      case VectorizerMode::one_hot:
        row.values.push_back(1.0);
        break;
      case VectorizerMode::count:
        row.values.push_back(count);
        break;
      case VectorizerMode::tfidf:
        row.values.push_back(count * idf_[term]);
        break;
    }
  }
  if (mode_ == VectorizerMode::tfidf) {
    const double norm = std::sqrt(row.squared_norm());
    if (norm > 0) {
      for (double& v : row.values) v /= norm;
    }
  }
  return row;
}

VectorizedDataset Vectorizer::transform(std::span<const std::string> documents, std::span<const std::size_t> labels,
                                        std::vector<std::string> class_labels) const {
  if (labels.size() != documents.size()) throw EvaluationError("labels are not aligned with documents");
  const auto index = index_of(vocabulary_);
  VectorizedDataset out;
  out.vocabulary = vocabulary_;
  out.class_labels = std::move(class_labels);
  out.labels.assign(labels.begin(), labels.end());
  out.rows.reserve(documents.size());
  for (const auto& doc : documents) out.rows.push_back(make_row(doc, index));
  return out;
}

VectorizedDataset vectorize(std::span<const std::string> documents, std::span<const std::size_t> labels,
                            std::vector<std::string> class_labels, std::vector<std::string> vocabulary,
                            VectorizerMode mode) {
  return Vectorizer::fit(documents, std::move(vocabulary), mode).transform(documents, labels, std::move(class_labels));
}

namespace {

struct PreparedCorpus {
  std::vector<std::vector<std::string>> tokens;
  std::vector<std::size_t> labels;
};

PreparedCorpus prepare(const LabeledCorpus& corpus, const std::vector<std::string>& label_set) {
  PreparedCorpus out;
  for (const auto& d : corpus.documents) {
    out.tokens.push_back(document_tokens(d.text));
    const auto it = std::lower_bound(label_set.begin(), label_set.end(), d.label);
    out.labels.push_back(static_cast<std::size_t>(it - label_set.begin()));
  }
  return out;
}

std::vector<std::string> filtered(const PreparedCorpus& corpus, const TopicDictionary& dictionary) {
  std::vector<std::string> out;
  out.reserve(corpus.tokens.size());
  for (const auto& tokens : corpus.tokens) {
    std::vector<std::string> kept;
    for (const auto& t : tokens) {
      if (dictionary.contains(t)) kept.push_back(t);
    }
    out.push_back(join(kept, " "));
  }
  return out;
}

}  // namespace

BenchmarkReport run_benchmark(const LabeledCorpus& train, const LabeledCorpus& test,
                              std::span<const TopicDictionary> dictionaries, std::span<const VectorizerMode> modes,
                              const TrainingParams& params) {
  if (collect_labels(train.documents) != collect_labels(test.documents)) {
    throw EvaluationError("train and test corpora have different label sets");
  }
  const std::vector<std::string> label_set = collect_labels(train.documents);
  const PreparedCorpus train_prepared = prepare(train, label_set);
  const PreparedCorpus test_prepared = prepare(test, label_set);

  BenchmarkReport report;
  for (const TopicDictionary& dictionary : dictionaries) {
    const std::vector<std::string> train_docs = filtered(train_prepared, dictionary);
    const std::vector<std::string> test_docs = filtered(test_prepared, dictionary);
    std::set<std::string> observed;
    for (const auto& doc : train_docs) {
      for (auto& t : split_whitespace(doc)) observed.insert(std::move(t));
    }
    std::vector<std::string> vocabulary(observed.begin(), observed.end());

    for (VectorizerMode mode : modes) {
      BenchmarkCell cell{dictionary.source, mode, dictionary.topic_count, dictionary.vocabulary_size(), {}, {}};
      if (vocabulary.empty()) {
        cell.failure = "dictionary leaves every training document empty";
        report.cells.push_back(std::move(cell));
        continue;
      }
      try {
        const Vectorizer vectorizer = Vectorizer::fit(train_docs, vocabulary, mode);
        const VectorizedDataset train_set = vectorizer.transform(train_docs, train_prepared.labels, label_set);
        const VectorizedDataset test_set = vectorizer.transform(test_docs, test_prepared.labels, label_set);
        const ClassifierModel model = train_classifier(train_set, params);
        cell.accuracy = evaluate_accuracy(model, test_set);
      } catch (const Error& e) {
        cell.failure = e.what();
      }
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

void write_report_csv(const BenchmarkReport& report, std::ostream& out) {
  out << "method,vectorizer,topic_count,vocabulary_size,accuracy\n";
  std::ostringstream acc;
  acc << std::fixed << std::setprecision(6);
  for (const auto& c : report.cells) {
    out << c.method << ',' << to_string(c.mode) << ',' << c.topic_count << ',' << c.vocabulary_size << ',';
    if (c.accuracy) {
      acc.str({});
      acc << *c.accuracy;
      out << acc.str();
    } else {
      out << "failed";
    }
    out << '\n';
  }
}

void write_report_table(const BenchmarkReport& report, std::ostream& out) {
  out << "Model,Topic number,Vocabulary size,TF-IDF,Count vect.,One-hot\n";
  std::vector<std::string> methods;
  for (const auto& c : report.cells) {
    if (std::find(methods.begin(), methods.end(), c.method) == methods.end()) methods.push_back(c.method);
  }
  auto cell_text = [&](const std::string& method, VectorizerMode mode) -> std::string {
    for (const auto& c : report.cells) {
      if (c.method != method || c.mode != mode) continue;
      if (!c.accuracy) return "failed";
      std::ostringstream s;
      s << std::fixed << std::setprecision(2) << *c.accuracy * 100.0 << '%';
      return s.str();
    }
    return "";
  };
  for (const auto& method : methods) {
    const auto first = std::find_if(report.cells.begin(), report.cells.end(),
                                    [&](const BenchmarkCell& c) { return c.method == method; });
    out << method << ',' << first->topic_count << ',' << first->vocabulary_size << ','
        << cell_text(method, VectorizerMode::tfidf) << ',' << cell_text(method, VectorizerMode::count) << ','
        << cell_text(method, VectorizerMode::one_hot) << '\n';
  }
}

}  // namespace reviewscope
