#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "reviewscope/corpus.hpp"
#include "reviewscope/dictionary.hpp"

namespace reviewscope {

/// Words of a document as the benchmark sees them: cleaned with the default
/// rules and with sentence delimiters removed.
std::vector<std::string> document_tokens(std::string_view text);

/// Keeps the tokens that are in the dictionary, in order, joined by spaces.
std::string filter_document(std::string_view text, const TopicDictionary& dictionary);

enum class VectorizerMode { one_hot, count, tfidf };

std::string_view to_string(VectorizerMode mode);
VectorizerMode parse_vectorizer_mode(std::string_view name);
/// Comma-separated mode names.
std::vector<VectorizerMode> parse_vectorizer_modes(std::string_view list);

struct SparseRow {
  std::vector<std::uint32_t> indices;  // ascending
  std::vector<double> values;

  double dot(std::span<const double> dense) const;
  double squared_norm() const;
};

struct VectorizedDataset {
  std::vector<std::string> vocabulary;
  std::vector<SparseRow> rows;
  std::vector<std::size_t> labels;       // index into class_labels
  std::vector<std::string> class_labels;

  std::size_t num_features() const { return vocabulary.size(); }
  std::size_t num_classes() const { return class_labels.size(); }
  /// Dense copy, rows x features.
  std::vector<std::vector<double>> dense() const;
};

/// Vocabulary and inverse document frequencies fitted on one set of
/// documents, applied to any other. Documents are whitespace-token strings.
class Vectorizer {
 public:
  /// idf(t) = ln((1 + N) / (1 + df(t))) + 1 over the fitted documents.
  /// Throws EvaluationError for an empty vocabulary.
  static Vectorizer fit(std::span<const std::string> documents, std::vector<std::string> vocabulary,
                        VectorizerMode mode);

  /// one-hot: 1 per present word; count: raw counts; tfidf: count * idf with
  /// each non-zero row scaled to unit L2 norm.
  SparseRow transform(std::string_view document) const;
  VectorizedDataset transform(std::span<const std::string> documents,
                              std::span<const std::size_t> labels,
                              std::vector<std::string> class_labels) const;

  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  const std::vector<double>& idf() const { return idf_; }
  VectorizerMode mode() const { return mode_; }

 private:
  SparseRow make_row(std::string_view document,
                     const std::unordered_map<std::string, std::uint32_t>& index) const;

  std::vector<std::string> vocabulary_;
  std::vector<double> idf_;
  VectorizerMode mode_ = VectorizerMode::tfidf;
};

/// Fit and transform the same documents.
VectorizedDataset vectorize(std::span<const std::string> documents, std::span<const std::size_t> labels,
                            std::vector<std::string> class_labels, std::vector<std::string> vocabulary,
                            VectorizerMode mode);

struct TrainingParams {
  double learning_rate = 0.1;
  std::size_t epochs = 500;
  double l2 = 1e-4;
  /// Full-batch descent from zero weights draws no randomness; the seed is
  /// carried so reports can echo it.
  std::uint64_t seed = 0;
};

/// Logistic regression. Two classes use one weight row (sigmoid on the
/// class-1 score); more classes use one row per class (softmax). Each row
/// holds |vocabulary| weights followed by the bias.
class ClassifierModel {
 public:
  ClassifierModel(std::vector<std::string> vocabulary, std::vector<std::string> class_labels);

  std::size_t num_features() const { return vocabulary_.size(); }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  std::size_t num_classes() const { return class_labels_.size(); }
  std::size_t num_rows() const { return num_classes() == 2 ? 1 : num_classes(); }
  const std::vector<std::string>& class_labels() const { return class_labels_; }

  std::span<double> weights() { return weights_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> row(std::size_t r) const;

  /// Per-class probabilities.
  std::vector<double> probabilities(const SparseRow& x) const;
  /// Argmax class, ties to the lowest index.
  std::size_t predict(const SparseRow& x) const;

 private:
  std::vector<std::string> vocabulary_;
  std::vector<std::string> class_labels_;
  std::vector<double> weights_;
};

/// Mean cross-entropy plus (l2 / 2) * |w|^2 over non-bias weights.
double classifier_loss(const ClassifierModel& model, const VectorizedDataset& data, double l2);
/// Gradient of classifier_loss with the layout of model.weights().
std::vector<double> classifier_gradient(const ClassifierModel& model, const VectorizedDataset& data,
                                        double l2);

/// Full-batch gradient descent from zero weights. When loss_history is given
/// it receives the loss before each epoch and after the last one. Throws
/// TrainingError when fewer than two classes have rows.
ClassifierModel train_classifier(const VectorizedDataset& train, const TrainingParams& params = {},
                                 std::vector<double>* loss_history = nullptr);

/// Fraction of rows predicted correctly. Throws EvaluationError for an empty
/// set or a vocabulary that differs from the model's training vocabulary.
double evaluate_accuracy(const ClassifierModel& model, const VectorizedDataset& test);

struct BenchmarkCell {
  std::string method;
  VectorizerMode mode = VectorizerMode::tfidf;
  std::size_t topic_count = 0;
  std::size_t vocabulary_size = 0;
  std::optional<double> accuracy;  // empty when the cell failed
  std::string failure;
};

struct BenchmarkReport {
  std::vector<BenchmarkCell> cells;  // dictionary-major, then mode
};

/// For each dictionary and mode: filter both corpora, fit the vectorizer on
/// the training side over (dictionary intersected with observed training
/// tokens), train, and score the test side. Degenerate cells are recorded as
/// failures. Throws EvaluationError when the label sets differ.
BenchmarkReport run_benchmark(const LabeledCorpus& train, const LabeledCorpus& test,
                              std::span<const TopicDictionary> dictionaries,
                              std::span<const VectorizerMode> modes, const TrainingParams& params = {});

/// `method,vectorizer,topic_count,vocabulary_size,accuracy`; failed cells
/// print "failed" as accuracy.
void write_report_csv(const BenchmarkReport& report, std::ostream& out);

/// One row per method with columns
/// `Model,Topic number,Vocabulary size,TF-IDF,Count vect.,One-hot`,
/// accuracies as percentages with two decimals.
void write_report_table(const BenchmarkReport& report, std::ostream& out);

}  // namespace reviewscope
