#include <algorithm>
#include <cmath>
#include <limits>

#include "reviewscope/error.hpp"
#include "reviewscope/evaluation.hpp"

namespace reviewscope {

ClassifierModel::ClassifierModel(std::vector<std::string> vocabulary, std::vector<std::string> class_labels)
    : vocabulary_(std::move(vocabulary)), class_labels_(std::move(class_labels)) {
  if (class_labels_.size() < 2) throw TrainingError("a classifier needs at least 2 classes");
  weights_.assign(num_rows() * (num_features() + 1), 0.0);
}

std::span<const double> ClassifierModel::row(std::size_t r) const {
  return std::span<const double>(weights_).subspan(r * (num_features() + 1), num_features() + 1);
}

namespace {

// Row score w . x + bias.
double score(std::span<const double> row, const SparseRow& x) {
  return x.dot(row.first(row.size() - 1)) + row.back();
}

double log1p_exp(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void check_shape(const ClassifierModel& model, const VectorizedDataset& data) {
  if (data.num_features() != model.num_features()) throw TrainingError("feature count differs from the model");
  if (data.class_labels != model.class_labels()) throw TrainingError("class labels differ from the model");
  if (data.rows.size() != data.labels.size()) throw TrainingError("labels are not aligned with rows");
}

// Accumulates loss and, when grad is non-null, its gradient.
double objective(const ClassifierModel& model, const VectorizedDataset& data, double l2, std::vector<double>* grad) {
  check_shape(model, data);
  const std::size_t stride = model.num_features() + 1;
  const std::size_t rows = model.num_rows();
  if (grad != nullptr) grad->assign(model.weights().size(), 0.0);
  const double inv_n = data.rows.empty() ? 0.0 : 1.0 / static_cast<double>(data.rows.size());
  double loss = 0;
  std::vector<double> z(rows);
  std::vector<double> residual(rows);

  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    const SparseRow& x = data.rows[i];
    const std::size_t y = data.labels[i];
    if (rows == 1) {
      const double zi = score(model.row(0), x);
      const double target = y == 1 ? 1.0 : 0.0;
      loss += log1p_exp(zi) - target * zi;
      residual[0] = sigmoid(zi) - target;
    } else {
      double peak = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < rows; ++k) {
        z[k] = score(model.row(k), x);
        peak = std::max(peak, z[k]);
      }
      double sum = 0;
      for (std::size_t k = 0; k < rows; ++k) sum += std::exp(z[k] - peak);
      const double lse = peak + std::log(sum);
      loss += lse - z[y];
      for (std::size_t k = 0; k < rows; ++k) residual[k] = std::exp(z[k] - lse) - (k == y ? 1.0 : 0.0);
    }
    if (grad != nullptr) {
      for (std::size_t k = 0; k < rows; ++k) {
        double* g = grad->data() + k * stride;
        for (std::size_t j = 0; j < x.indices.size(); ++j) g[x.indices[j]] += residual[k] * x.values[j] * inv_n;
        g[stride - 1] += residual[k] * inv_n;
      }
    }
  }
  loss *= inv_n;

  const auto w = model.weights();
  for (std::size_t k = 0; k < rows; ++k) {
    for (std::size_t j = 0; j + 1 < stride; ++j) {
      const double wj = w[k * stride + j];
      loss += 0.5 * l2 * wj * wj;
      if (grad != nullptr) (*grad)[k * stride + j] += l2 * wj;
    }
  }
  return loss;
}

}  // namespace

std::vector<double> ClassifierModel::probabilities(const SparseRow& x) const {
  std::vector<double> p(num_classes());
  if (num_rows() == 1) {
    p[1] = sigmoid(score(row(0), x));
    p[0] = 1.0 - p[1];
    return p;
  }
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k] = score(row(k), x);
    peak = std::max(peak, p[k]);
  }
  double sum = 0;
  for (double& v : p) {
    v = std::exp(v - peak);
    sum += v;
  }
  for (double& v : p) v /= sum;
  return p;
}

std::size_t ClassifierModel::predict(const SparseRow& x) const {
  if (num_rows() == 1) return score(row(0), x) > 0 ? 1 : 0;
  std::size_t best = 0;
  double best_score = score(row(0), x);
  for (std::size_t k = 1; k < num_classes(); ++k) {
    const double s = score(row(k), x);
    if (s > best_score) {
      best_score = s;
      best = k;
    }
  }
  return best;
}

double classifier_loss(const ClassifierModel& model, const VectorizedDataset& data, double l2) {
  return objective(model, data, l2, nullptr);
}

std::vector<double> classifier_gradient(const ClassifierModel& model, const VectorizedDataset& data, double l2) {
  std::vector<double> grad;
  objective(model, data, l2, &grad);
  return grad;
}

ClassifierModel train_classifier(const VectorizedDataset& train, const TrainingParams& params,
                                 std::vector<double>* loss_history) {
  if (train.num_classes() < 2) throw TrainingError("training needs at least 2 classes");
  std::vector<std::size_t> per_class(train.num_classes(), 0);
  for (std::size_t y : train.labels) {
    if (y >= per_class.size()) throw TrainingError("label index out of range");
    ++per_class[y];
  }
  const auto present = std::count_if(per_class.begin(), per_class.end(), [](std::size_t c) { return c > 0; });
  if (present < 2) throw TrainingError("training set contains a single class");
  for (std::size_t k = 0; k < per_class.size(); ++k) {
    if (per_class[k] == 0) throw TrainingError("class \"" + train.class_labels[k] + "\" has no training rows");
  }
  if (!(params.learning_rate > 0) || params.l2 < 0) throw TrainingError("learning_rate must be > 0 and l2 >= 0");

  ClassifierModel model(train.vocabulary, train.class_labels);
  if (loss_history != nullptr) loss_history->clear();
  std::vector<double> grad;
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    const double loss = objective(model, train, params.l2, &grad);
    if (loss_history != nullptr) loss_history->push_back(loss);
    auto w = model.weights();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= params.learning_rate * grad[i];
  }
  if (loss_history != nullptr) loss_history->push_back(classifier_loss(model, train, params.l2));
  return model;
}

double evaluate_accuracy(const ClassifierModel& model, const VectorizedDataset& test) {
  if (test.rows.empty()) throw EvaluationError("empty test set");
  if (test.vocabulary != model.vocabulary()) throw EvaluationError("test vocabulary differs from training vocabulary");
  if (test.class_labels != model.class_labels()) throw EvaluationError("test class labels differ from the model");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < test.rows.size(); ++i) {
    if (model.predict(test.rows[i]) == test.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.rows.size());
}

}  // namespace reviewscope
