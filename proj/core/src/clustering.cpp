#include "reviewscope/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <unordered_set>

#include <Eigen/Dense>

#include "reviewscope/config.hpp"
#include "reviewscope/error.hpp"

namespace reviewscope {

std::string_view to_string(DensityMode mode) {
  return mode == DensityMode::mean_pairwise ? "mean" : "min";
}

DensityMode parse_density_mode(std::string_view name) {
  if (name == "mean") return DensityMode::mean_pairwise;
  if (name == "min") return DensityMode::min_pairwise;
  throw ConfigError("density mode must be mean or min, got \"" + std::string(name) + "\"");
}

std::string_view to_string(ClusterStatus status) {
  return status == ClusterStatus::accepted ? "accepted" : "outlier";
}

void ClusterParams::validate() const {
  if (!(density_threshold > -1.0 && density_threshold <= 1.0)) {
    throw ConfigError("density_threshold must lie in (-1, 1]");
  }
  if (min_size < 1) throw ConfigError("min_size must be >= 1");
  if (max_depth < 1) throw ConfigError("max_depth must be >= 1");
  if (split_arity < 2) throw ConfigError("split_arity must be >= 2");
}

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Unit-normalized copies of the vectors, one per row. Returns false on a
// zero-norm row.
template <typename GetVector>
bool unit_rows(std::size_t n, std::size_t dim, GetVector get, RowMatrix& out) {
  out.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < n; ++i) {
    std::span<const double> v = get(i);
    double s = 0;
    for (double x : v) s += x * x;
    const double norm = std::sqrt(s);
    if (norm < kZeroNormThreshold) return false;
    for (std::size_t d = 0; d < dim; ++d) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = v[d] / norm;
  }
  return true;
}

RowMatrix gather(const RowMatrix& rows, std::span<const std::size_t> subset) {
  RowMatrix out(static_cast<Eigen::Index>(subset.size()), rows.cols());
  for (std::size_t i = 0; i < subset.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = rows.row(static_cast<Eigen::Index>(subset[i]));
  return out;
}

double density_of(const RowMatrix& rows, std::span<const std::size_t> subset, DensityMode mode) {
  const std::size_t n = subset.size();
  if (n == 1) return 1.0;
  if (mode == DensityMode::mean_pairwise) {
    // sum_{i<j} u_i.u_j = (|sum u|^2 - sum |u|^2) / 2
    Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(rows.cols());
    double self = 0;
    for (std::size_t i : subset) {
      sum += rows.row(static_cast<Eigen::Index>(i));
      self += rows.row(static_cast<Eigen::Index>(i)).squaredNorm();
    }
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
    return std::clamp((sum.squaredNorm() - self) / pairs, -1.0, 1.0);
  }
  const RowMatrix sub = gather(rows, subset);
  const Eigen::MatrixXd gram = sub * sub.transpose();
  double lowest = 1.0;
  for (Eigen::Index i = 0; i < gram.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < gram.cols(); ++j) lowest = std::min(lowest, gram(i, j));
  }
  return std::clamp(lowest, -1.0, 1.0);
}

// Average-linkage agglomeration over rows[subset] down to `groups` clusters.
// Returns positions into subset.
std::vector<std::vector<std::size_t>> agglomerate(const RowMatrix& rows, std::span<const std::size_t> subset,
                                                  std::size_t groups) {
  const std::size_t n = subset.size();
  const RowMatrix sub = gather(rows, subset);
  Eigen::MatrixXd dist = Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) -
                         Eigen::MatrixXd(sub * sub.transpose());
  auto d = [&](std::size_t a, std::size_t b) -> double& {
    return dist(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
  };

  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<char> active(n, 1);
  std::vector<std::size_t> size(n, 1);
  std::vector<std::vector<std::size_t>> members(n);
  for (std::size_t i = 0; i < n; ++i) members[i] = {i};

  // Nearest active neighbour with a higher slot index; strict comparison
  // keeps the lowest index among equal distances.
  std::vector<std::size_t> nn(n, kNone);
  std::vector<double> nn_dist(n, kInf);
  auto refresh = [&](std::size_t i) {
    nn[i] = kNone;
    nn_dist[i] = kInf;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (active[j] && d(i, j) < nn_dist[i]) {
        nn_dist[i] = d(i, j);
        nn[i] = j;
      }
    }
  };
  for (std::size_t i = 0; i < n; ++i) refresh(i);

  for (std::size_t clusters = n; clusters > groups; --clusters) {
    std::size_t a = kNone;
    for (std::size_t i = 0; i < n; ++i) {
      if (active[i] && nn[i] != kNone && (a == kNone || nn_dist[i] < nn_dist[a])) a = i;
    }
    const std::size_t b = nn[a];
    const double wa = static_cast<double>(size[a]);
    const double wb = static_cast<double>(size[b]);
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == a || k == b) continue;
      const double merged = (wa * d(a, k) + wb * d(b, k)) / (wa + wb);
      d(a, k) = merged;
      d(k, a) = merged;
    }
    size[a] += size[b];
    members[a].insert(members[a].end(), members[b].begin(), members[b].end());
    members[b].clear();
    active[b] = 0;

    for (std::size_t k = 0; k < a; ++k) {
      if (!active[k]) continue;
      if (nn[k] == a || nn[k] == b) {
        refresh(k);
      } else if (d(k, a) < nn_dist[k] || (d(k, a) == nn_dist[k] && a < nn[k])) {
        nn_dist[k] = d(k, a);
        nn[k] = a;
      }
    }
    for (std::size_t k = a + 1; k < b; ++k) {
      if (active[k] && nn[k] == b) refresh(k);
    }
    refresh(a);
  }

  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!active[i]) continue;
    std::sort(members[i].begin(), members[i].end());
    out.push_back(std::move(members[i]));
  }
  return out;
}

struct Recursion {
  const RowMatrix& rows;
  const std::vector<PhraseVector>& phrases;
  const ClusterParams& params;
  ClusteringResult result;
  std::size_t next_id = 0;

  void emit(std::span<const std::size_t> subset, double density, ClusterStatus status, std::size_t depth) {
    TopicCluster c;
    c.id = next_id++;
    c.density = density;
    c.status = status;
    c.depth = depth;
    c.members.reserve(subset.size());
    for (std::size_t i : subset) c.members.push_back(phrases[i]);
    (status == ClusterStatus::accepted ? result.accepted : result.outliers).push_back(std::move(c));
  }

  void run(const std::vector<std::size_t>& subset, std::size_t depth) {
    const double density = density_of(rows, subset, params.density_mode);
    if (subset.size() < params.min_size) {
      emit(subset, density, ClusterStatus::outlier, depth);
      return;
    }
    if (density >= params.density_threshold) {
      emit(subset, density, ClusterStatus::accepted, depth);
      return;
    }
    if (depth >= params.max_depth) {
      emit(subset, density, ClusterStatus::outlier, depth);
      return;
    }
    const auto parts = agglomerate(rows, subset, std::min(params.split_arity, subset.size()));
    for (const auto& part : parts) {
      std::vector<std::size_t> child;
      child.reserve(part.size());
      for (std::size_t p : part) child.push_back(subset[p]);
      run(child, depth + 1);
    }
  }
};

}  // namespace

double cluster_density(std::span<const EmbeddingVector> members, DensityMode mode) {
  if (members.empty()) throw DensityError("density of an empty cluster");
  const std::size_t dim = members.front().dim();
  for (const auto& m : members) {
    if (m.dim() != dim) throw DensityError("cluster members have mixed dimensions");
  }
  RowMatrix rows;
  if (!unit_rows(members.size(), dim, [&](std::size_t i) { return members[i].values(); }, rows)) {
    throw DensityError("cluster has a zero-norm member");
  }
  std::vector<std::size_t> all(members.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return density_of(rows, all, mode);
}

std::vector<std::vector<std::size_t>> agglomerative_split(std::span<const EmbeddingVector> members,
                                                          std::size_t arity) {
  if (members.size() < 2) throw SplitError("split needs at least 2 members");
  if (arity < 2) throw SplitError("split arity must be >= 2");
  const std::size_t dim = members.front().dim();
  for (const auto& m : members) {
    if (m.dim() != dim) throw SplitError("split members have mixed dimensions");
  }
  RowMatrix rows;
  if (!unit_rows(members.size(), dim, [&](std::size_t i) { return members[i].values(); }, rows)) {
    throw SplitError("split member has zero norm");
  }
  std::vector<std::size_t> all(members.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return agglomerate(rows, all, std::min(arity, members.size()));
}

ClusteringResult recursive_cluster(std::vector<PhraseVector> phrases, const ClusterParams& params) {
  params.validate();
  if (phrases.empty()) throw ClusteringError("nothing to cluster");
  const std::size_t dim = phrases.front().vector.dim();
  std::unordered_set<std::string> seen;
  for (const auto& p : phrases) {
    if (p.vector.dim() != dim) {
      throw ClusteringError("phrase \"" + p.text + "\" has dim " + std::to_string(p.vector.dim()) + ", expected " +
                            std::to_string(dim));
    }
    if (!seen.insert(p.text).second) throw ClusteringError("duplicate phrase \"" + p.text + "\"");
  }
  RowMatrix rows;
  if (!unit_rows(phrases.size(), dim, [&](std::size_t i) { return phrases[i].vector.values(); }, rows)) {
    throw ClusteringError("a phrase vector has zero norm");
  }
  Recursion recursion{rows, phrases, params, {}, 0};
  std::vector<std::size_t> all(phrases.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  recursion.run(all, 0);
  return std::move(recursion.result);
}

TopicDictionary build_dictionary(std::span<const TopicCluster> accepted, std::string source) {
  std::vector<std::string> words;
  for (const TopicCluster& c : accepted) {
    for (const PhraseVector& m : c.members) {
      for (auto& w : split_whitespace(m.text)) words.push_back(std::move(w));
    }
  }
  return make_dictionary(std::move(words), accepted.size(), std::move(source));
}

void write_topics(const ClusteringResult& result, std::ostream& out) {
  std::vector<const TopicCluster*> all;
  for (const auto& c : result.accepted) all.push_back(&c);
  for (const auto& c : result.outliers) all.push_back(&c);
  std::sort(all.begin(), all.end(), [](const TopicCluster* a, const TopicCluster* b) { return a->id < b->id; });
  std::ostringstream line;
  line << std::fixed << std::setprecision(6);
  for (const TopicCluster* c : all) {
    for (const PhraseVector& m : c->members) {
      line.str({});
      line << c->id << '\t' << c->density << '\t' << to_string(c->status) << '\t' << m.text << '\n';
      out << line.str();
    }
  }
}

}  // namespace reviewscope
