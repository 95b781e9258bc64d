#include <cmath>

#include <Eigen/Dense>

#include "reviewscope/embedding.hpp"
#include "reviewscope/error.hpp"

namespace reviewscope {

std::vector<Point2> pca_project_2d(std::span<const EmbeddingVector> vectors) {
  if (vectors.size() < 2) throw ProjectionError("projection needs at least 2 vectors");
  const std::size_t dim = vectors.front().dim();
  const auto n = static_cast<Eigen::Index>(vectors.size());
  Eigen::MatrixXd data(n, static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& v = vectors[static_cast<std::size_t>(i)];
    if (v.dim() != dim) throw ProjectionError("projection inputs have mixed dimensions");
    for (std::size_t d = 0; d < dim; ++d) data(i, static_cast<Eigen::Index>(d)) = v[d];
  }
  const Eigen::RowVectorXd mean = data.colwise().mean();
  data.rowwise() -= mean;

  const double scale = std::max(1.0, data.cwiseAbs().maxCoeff());
  Eigen::BDCSVD<Eigen::MatrixXd> svd(data, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double tolerance = 1e-12 * scale * std::sqrt(static_cast<double>(n));
  if (sv.size() == 0 || sv(0) <= tolerance) {
    throw ProjectionError("projection needs at least 2 distinct vectors (zero variance)");
  }

  std::vector<Point2> out(vectors.size());
  for (int axis = 0; axis < 2; ++axis) {
    if (axis >= sv.size() || sv(axis) <= tolerance) continue;  // rank-1 input: second axis stays 0
    Eigen::VectorXd direction = svd.matrixV().col(axis);
    Eigen::Index pivot = 0;
    direction.cwiseAbs().maxCoeff(&pivot);
    const double sign = direction(pivot) < 0 ? -1.0 : 1.0;
    const Eigen::VectorXd coords = data * (sign * direction);
    for (Eigen::Index i = 0; i < n; ++i) {
      (axis == 0 ? out[static_cast<std::size_t>(i)].x : out[static_cast<std::size_t>(i)].y) = coords(i);
    }
  }
  return out;
}

}  // namespace reviewscope
