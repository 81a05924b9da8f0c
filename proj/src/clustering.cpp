// Copyright 2026 The graphsom Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "graphsom/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include <fmt/format.h>

#include "graphsom/error.hpp"
#include "rng.hpp"
#include "seeding.hpp"

namespace graphsom {

namespace {

// Explicit coordinates: centers are stored as points.
class EuclideanGeometry {
 public:
  explicit EuclideanGeometry(const Eigen::MatrixXd& points) : x_(points) {}

  Index size() const { return static_cast<Index>(x_.rows()); }

  double point_distance_sq(Index a, Index b) const {
    return (x_.row(static_cast<Eigen::Index>(a)) - x_.row(static_cast<Eigen::Index>(b)))
        .squaredNorm();
  }

  void seed_centers(std::span<const Index> seeds) {
    centers_.resize(static_cast<Eigen::Index>(seeds.size()), x_.cols());
    for (std::size_t c = 0; c < seeds.size(); ++c) {
      centers_.row(static_cast<Eigen::Index>(c)) = x_.row(static_cast<Eigen::Index>(seeds[c]));
    }
  }

  void update_means(std::span<const Index> assignment, Index k) {
    centers_.setZero(static_cast<Eigen::Index>(k), x_.cols());
    std::vector<Index> counts(k, 0);
    for (Index j = 0; j < assignment.size(); ++j) {
      centers_.row(static_cast<Eigen::Index>(assignment[j])) +=
          x_.row(static_cast<Eigen::Index>(j));
      ++counts[assignment[j]];
    }
    for (Index c = 0; c < k; ++c) {
      if (counts[c] > 0) centers_.row(static_cast<Eigen::Index>(c)) /= static_cast<double>(counts[c]);
    }
  }

  void distances(Eigen::MatrixXd& d) const {
    d.resize(x_.rows(), centers_.rows());
    for (Eigen::Index c = 0; c < centers_.rows(); ++c) {
      for (Eigen::Index j = 0; j < x_.rows(); ++j) {
        d(j, c) = (x_.row(j) - centers_.row(c)).squaredNorm();
      }
    }
  }

  std::optional<Eigen::MatrixXd> centers() const { return centers_; }

 private:
  const Eigen::MatrixXd& x_;
  Eigen::MatrixXd centers_;
};

// Feature space of a kernel: center c is sum_i weights(c, i) phi(x_i).
class KernelGeometry {
 public:
  explicit KernelGeometry(const Eigen::MatrixXd& k) : k_(k) {}

  Index size() const { return static_cast<Index>(k_.rows()); }

  double point_distance_sq(Index a, Index b) const {
    const auto i = static_cast<Eigen::Index>(a);
    const auto j = static_cast<Eigen::Index>(b);
    return std::max(0.0, k_(i, i) - 2.0 * k_(i, j) + k_(j, j));
  }

  void seed_centers(std::span<const Index> seeds) {
    weights_.setZero(static_cast<Eigen::Index>(seeds.size()), k_.rows());
    for (std::size_t c = 0; c < seeds.size(); ++c) {
      weights_(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(seeds[c])) = 1.0;
    }
  }

  void update_means(std::span<const Index> assignment, Index k) {
    weights_.setZero(static_cast<Eigen::Index>(k), k_.rows());
    std::vector<Index> counts(k, 0);
    for (Index c : assignment) ++counts[c];
    for (Index j = 0; j < assignment.size(); ++j) {
      weights_(static_cast<Eigen::Index>(assignment[j]), static_cast<Eigen::Index>(j)) =
          1.0 / static_cast<double>(counts[assignment[j]]);
    }
  }

  void distances(Eigen::MatrixXd& d) const {
    const Eigen::MatrixXd cross = k_ * weights_.transpose();  // n x k
    d.resize(k_.rows(), weights_.rows());
    for (Eigen::Index c = 0; c < weights_.rows(); ++c) {
      const double self = weights_.row(c).dot(cross.col(c));
      for (Eigen::Index j = 0; j < k_.rows(); ++j) {
        d(j, c) = std::max(0.0, k_(j, j) - 2.0 * cross(j, c) + self);
      }
    }
  }

  std::optional<Eigen::MatrixXd> centers() const { return std::nullopt; }

 private:
  const Eigen::MatrixXd& k_;
  Eigen::MatrixXd weights_;
};

std::vector<Index> nearest_centers(const Eigen::MatrixXd& d) {
  std::vector<Index> out(static_cast<Index>(d.rows()));
  for (Eigen::Index j = 0; j < d.rows(); ++j) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < d.cols(); ++c) {
      if (d(j, c) < d(j, best)) best = c;
    }
    out[static_cast<Index>(j)] = static_cast<Index>(best);
  }
  return out;
}

// Refills each empty cluster with the point farthest from its current center,
// taken from clusters that keep at least one member.
void repair_empty(std::vector<Index>& assignment, const Eigen::MatrixXd& d, Index k) {
  std::vector<Index> counts(k, 0);
  for (Index c : assignment) ++counts[c];
  for (Index empty = 0; empty < k; ++empty) {
    if (counts[empty] > 0) continue;
    Index far = assignment.size();
    double far_distance = -1.0;
    for (Index j = 0; j < assignment.size(); ++j) {
      if (counts[assignment[j]] < 2) continue;
      const double dj = d(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(assignment[j]));
      if (dj > far_distance) {
        far_distance = dj;
        far = j;
      }
    }
    --counts[assignment[far]];
    assignment[far] = empty;
    counts[empty] = 1;
  }
}

double assigned_energy(const Eigen::MatrixXd& d, std::span<const Index> assignment) {
  double e = 0.0;
  for (Index j = 0; j < assignment.size(); ++j) {
    e += d(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(assignment[j]));
  }
  return e;
}

void validate(const KMeansOptions& options, Index n) {
  if (options.k < 1 || options.k > n) {
    throw ValidationError(fmt::format("k = {} must lie in 1..{}", options.k, n));
  }
  if (options.restarts < 1) throw ValidationError("restarts must be at least 1");
  if (options.max_iterations < 1) throw ValidationError("max_iterations must be at least 1");
}

template <class Geometry>
KMeansResult lloyd(Geometry& geo, const KMeansOptions& options, std::string tag) {
  const Index k = options.k;
  detail::Rng rng(options.seed);

  std::optional<KMeansResult> best;
  Eigen::MatrixXd d;
  for (int restart = 0; restart < options.restarts; ++restart) {
    geo.seed_centers(detail::seed_plus_plus(geo, k, rng));
    std::vector<Index> assignment;
    std::vector<double> trace;
    int iterations = 0;
    while (true) {
      geo.distances(d);
      if (!assignment.empty()) trace.push_back(assigned_energy(d, assignment));
      auto next = nearest_centers(d);
      if (next == assignment || iterations == options.max_iterations) break;
      repair_empty(next, d, k);
      assignment = std::move(next);
      geo.update_means(assignment, k);
      ++iterations;
    }
    const double energy = trace.back();
    if (!best || detail::clearly_lower(energy, best->within_energy)) {
      Params params{{"k", std::to_string(k)},
                    {"seed", std::to_string(options.seed)},
                    {"restarts", std::to_string(options.restarts)}};
      best = KMeansResult{Partition::compact(assignment, tag, std::move(params)),
                          geo.centers(),
                          energy,
                          options.restarts,
                          iterations,
                          std::move(trace)};
    }
  }
  return std::move(*best);
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, const KMeansOptions& options) {
  if (points.rows() == 0) throw ValidationError("kmeans needs at least one point");
  if (!points.allFinite()) throw NumericalError("kmeans input has non-finite coordinates");
  validate(options, static_cast<Index>(points.rows()));
  EuclideanGeometry geo(points);
  return lloyd(geo, options, "kmeans");
}

KMeansResult kernel_kmeans(const KernelMatrix& k, const KMeansOptions& options) {
  validate(options, k.order());
  KernelGeometry geo(k.matrix());
  auto result = lloyd(geo, options, "kernel-kmeans");
  if (k.beta()) {
    Params params = result.partition.params();
    params["beta"] = fmt::format("{}", *k.beta());
    result.partition.set_provenance("kernel-kmeans", std::move(params));
  }
  return result;
}

KMeansResult spectral_clustering(const WeightedGraph& g, Index p, const KMeansOptions& options) {
  const Index n = g.vertex_count();
  if (p < 1 || p > n) throw ValidationError(fmt::format("p = {} must lie in 1..{}", p, n));
  validate(options, n);
  const Eigen::MatrixXd embedding = spectral_embedding(laplacian(g), p);
  auto result = kmeans(embedding, options);
  Params params = result.partition.params();
  params["p"] = std::to_string(p);
  result.partition.set_provenance("spectral", std::move(params));
  return result;
}

double kernel_distance_sq(const KernelMatrix& k, Index j, std::span<const double> coeffs) {
  const Index n = k.order();
  if (j >= n) throw ValidationError(fmt::format("vertex {} out of range (n = {})", j, n));
  if (coeffs.size() != n) {
    throw ValidationError(fmt::format("expected {} coefficients, got {}", n, coeffs.size()));
  }
  double sum = 0.0;
  for (double c : coeffs) {
    if (!(c >= 0.0)) throw ValidationError("convex coefficients must be nonnegative");
    sum += c;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ValidationError(fmt::format("convex coefficients sum to {:.17g}, not 1", sum));
  }
  const Eigen::Map<const Eigen::VectorXd> gamma(coeffs.data(), static_cast<Eigen::Index>(n));
  const Eigen::VectorXd k_gamma = k.matrix() * gamma;
  const auto jj = static_cast<Eigen::Index>(j);
  return std::max(0.0, k(j, j) - 2.0 * k_gamma(jj) + gamma.dot(k_gamma));
}

double q_modularity(const WeightedGraph& g, const Partition& p, EdgeWeighting weighting) {
  if (p.size() != g.vertex_count()) {
    throw ValidationError(fmt::format("partition covers {} vertices, graph has {}", p.size(),
                                      g.vertex_count()));
  }
  if (g.edge_count() == 0) throw ValidationError("q-modularity is undefined without edges");

  const Index k = p.cluster_count();
  Eigen::MatrixXd between = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k),
                                                  static_cast<Eigen::Index>(k));
  for (Index j = 0; j < g.vertex_count(); ++j) {
    for (const auto& nb : g.neighbors(j)) {
      if (nb.vertex >= j) continue;
      const double w = weighting == EdgeWeighting::weighted ? nb.weight : 1.0;
      const auto a = static_cast<Eigen::Index>(p.cluster_of(nb.vertex));
      const auto b = static_cast<Eigen::Index>(p.cluster_of(j));
      between(std::min(a, b), std::max(a, b)) += w;
    }
  }
  // between is upper triangular: diagonal holds intra-cluster weight.
  const double total = between.sum();
  double q = 0.0;
  for (Eigen::Index c = 0; c < between.rows(); ++c) {
    double touching = 2.0 * between(c, c);
    for (Eigen::Index o = 0; o < between.rows(); ++o) {
      if (o != c) touching += between(std::min(c, o), std::max(c, o));
    }
    const double e = between(c, c) / total;
    const double a = touching / (2.0 * total);
    q += e - a * a;
  }
  return q;
}

double interpolated_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw ValidationError("quantile of an empty sequence");
  const double h = static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

PartitionStats partition_stats(const WeightedGraph& g, const Partition& p) {
  if (p.size() != g.vertex_count()) {
    throw ValidationError(fmt::format("partition covers {} vertices, graph has {}", p.size(),
                                      g.vertex_count()));
  }
  PartitionStats s;
  s.num_vertices = p.size();
  s.num_clusters = p.cluster_count();
  s.cluster_sizes = p.cluster_sizes();
  std::vector<double> sorted(s.cluster_sizes.begin(), s.cluster_sizes.end());
  std::sort(sorted.begin(), sorted.end());
  s.num_singletons = static_cast<Index>(
      std::count(s.cluster_sizes.begin(), s.cluster_sizes.end(), Index{1}));
  s.max_size = *std::max_element(s.cluster_sizes.begin(), s.cluster_sizes.end());
  s.median_size = interpolated_quantile(sorted, 0.5);
  s.third_quartile_size = interpolated_quantile(sorted, 0.75);
  if (g.edge_count() > 0) {
    s.q_modularity = q_modularity(g, p, EdgeWeighting::weighted);
    s.q_modularity_unweighted = q_modularity(g, p, EdgeWeighting::unweighted);
  }
  return s;
}

}  // namespace graphsom
