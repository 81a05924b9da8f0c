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

// Graph and point generators plus independent reference computations used
// as oracles by the tests.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "graphsom/graph.hpp"
#include "support/edge_text.hpp"

namespace graphsom::testing {

class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) {
    return std::min(static_cast<std::size_t>(uniform() * static_cast<double>(n)), n - 1);
  }
  // Box-Muller
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::mt19937_64 engine_;
};

inline std::vector<std::string> numbered_labels(Index n, const std::string& prefix = "v") {
  std::vector<std::string> labels;
  for (Index i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i));
  return labels;
}

// Two disjoint unit-weight cliques; vertices 0..size-1 form the first.
inline WeightedGraph two_cliques(Index size = 10) {
  std::vector<std::string> labels;
  for (Index i = 0; i < size; ++i) labels.push_back("a" + std::to_string(i));
  for (Index i = 0; i < size; ++i) labels.push_back("b" + std::to_string(i));
  std::vector<Edge> edges;
  for (Index c = 0; c < 2; ++c) {
    for (Index i = 0; i < size; ++i) {
      for (Index j = i + 1; j < size; ++j) edges.push_back({c * size + i, c * size + j, 1.0});
    }
  }
  return WeightedGraph(std::move(labels), edges);
}

inline WeightedGraph path_graph(Index n) {
  std::vector<Edge> edges;
  for (Index i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
  return WeightedGraph(numbered_labels(n), edges);
}

inline WeightedGraph triangle() {
  const std::vector<Edge> edges{{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}};
  return WeightedGraph({"x", "y", "z"}, edges);
}

// n vertices, `m` distinct random pairs (m clamped to n(n-1)/2). Weights
// uniform in [0.5, 3] or all 1.
inline WeightedGraph random_graph(Index n, Index m, std::uint64_t seed, bool weighted = true) {
  TestRng rng(seed);
  const Index max_edges = n * (n - 1) / 2;
  m = std::min(m, max_edges);
  std::set<std::pair<Index, Index>> seen;
  std::vector<Edge> edges;
  while (edges.size() < m) {
    Index a = rng.index(n);
    Index b = rng.index(n);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (!seen.emplace(a, b).second) continue;
    edges.push_back({a, b, weighted ? rng.uniform(0.5, 3.0) : 1.0});
  }
  return WeightedGraph(numbered_labels(n), edges);
}

inline Eigen::MatrixXd random_points(Index n, Index d, std::uint64_t seed) {
  TestRng rng(seed);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = rng.normal();
  }
  return x;
}

// `per_blob` points around each corner of the unit square, spread sigma.
inline Eigen::MatrixXd square_blobs(Index per_blob, double sigma, std::uint64_t seed) {
  TestRng rng(seed);
  const double corners[4][2] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  Eigen::MatrixXd x(static_cast<Eigen::Index>(4 * per_blob), 2);
  for (Index b = 0; b < 4; ++b) {
    for (Index i = 0; i < per_blob; ++i) {
      const auto r = static_cast<Eigen::Index>(b * per_blob + i);
      x(r, 0) = corners[b][0] + sigma * rng.normal();
      x(r, 1) = corners[b][1] + sigma * rng.normal();
    }
  }
  return x;
}

// exp(a) by a 30-term Taylor series with scaling and squaring. Shares no
// code with the eigensolver route.
inline Eigen::MatrixXd expm_series(const Eigen::MatrixXd& a, int terms = 30) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.5) ++squarings;
  const Eigen::MatrixXd scaled = a / std::pow(2.0, squarings);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  Eigen::MatrixXd term = sum;
  for (int t = 1; t < terms; ++t) {
    term = term * scaled / static_cast<double>(t);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

// Newman's matrix form (1/2m) sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j)
// with weights as multiplicities.
inline double newman_modularity(const WeightedGraph& g, const std::vector<Index>& cluster) {
  const Eigen::MatrixXd& a = g.weights();
  const Eigen::VectorXd k = a.rowwise().sum();
  const double two_m = k.sum();
  double q = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (cluster[static_cast<Index>(i)] != cluster[static_cast<Index>(j)]) continue;
      q += a(i, j) - k(i) * k(j) / two_m;
    }
  }
  return q / two_m;
}

// Q from literal edge counts: e_c = internal edges / m, a_c = edge ends in
// c / 2m. Unit weights only.
inline double counted_modularity(const WeightedGraph& g, const std::vector<Index>& cluster,
                                 Index clusters) {
  std::vector<double> internal(clusters, 0.0);
  std::vector<double> ends(clusters, 0.0);
  double m = 0.0;
  for (Index i = 0; i < g.vertex_count(); ++i) {
    for (const auto& nb : g.neighbors(i)) {
      if (nb.vertex < i) continue;
      m += 1.0;
      ends[cluster[i]] += 1.0;
      ends[cluster[nb.vertex]] += 1.0;
      if (cluster[i] == cluster[nb.vertex]) internal[cluster[i]] += 1.0;
    }
  }
  double q = 0.0;
  for (Index c = 0; c < clusters; ++c) {
    const double e = internal[c] / m;
    const double a = ends[c] / (2.0 * m);
    q += e - a * a;
  }
  return q;
}

}  // namespace graphsom::testing
