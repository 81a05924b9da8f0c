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

// Lloyd k-means in explicit coordinates and in a kernel feature space,
// spectral clustering, and partition quality measures.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "graphsom/graph.hpp"
#include "graphsom/linalg.hpp"

namespace graphsom {

struct KMeansOptions {
  Index k = 2;
  std::uint64_t seed = 0;
  int restarts = 10;
  int max_iterations = 300;
};

struct KMeansResult {
  Partition partition;
  // k x p cluster means; empty for the kernel variant.
  std::optional<Eigen::MatrixXd> centers;
  // Sum of squared (feature-space) distances to the assigned means.
  double within_energy = 0.0;
  int restarts_used = 0;
  // Lloyd update steps performed by the reported restart.
  int iterations = 0;
  // Energy of the reported restart after each update step; non-increasing.
  std::vector<double> energy_trace;
};

// k-means++ seeding per restart, Lloyd iterations until the assignment is
// stable, lowest-index tie breaking, empty clusters refilled with the point
// farthest from its mean. The lowest-energy restart is returned.
KMeansResult kmeans(const Eigen::MatrixXd& points, const KMeansOptions& options);

// laplacian -> spectral_embedding(p) -> kmeans.
KMeansResult spectral_clustering(const WeightedGraph& g, Index p, const KMeansOptions& options);

// Squared feature-space distance from vertex j to sum_i coeffs[i] phi(x_i).
// coeffs must be nonnegative and sum to 1 within 1e-12.
double kernel_distance_sq(const KernelMatrix& k, Index j, std::span<const double> coeffs);

// Lloyd iterations in the feature space of k, with means held as uniform
// weights over members. Same seeding and repair rules as kmeans(), so
// kernel_kmeans(X X^T) and kmeans(X) agree for the same options.
KMeansResult kernel_kmeans(const KernelMatrix& k, const KMeansOptions& options);

enum class EdgeWeighting { weighted, unweighted };

// Q = sum_j (e_j - a_j^2). With EdgeWeighting::unweighted every positive
// edge counts once. Throws ValidationError on graphs without edges.
double q_modularity(const WeightedGraph& g, const Partition& p,
                    EdgeWeighting weighting = EdgeWeighting::weighted);

struct PartitionStats {
  std::optional<double> q_modularity;             // empty for edgeless graphs
  std::optional<double> q_modularity_unweighted;  // literal edge counting
  Index num_vertices = 0;
  Index num_clusters = 0;
  Index num_singletons = 0;
  Index max_size = 0;
  double median_size = 0.0;
  double third_quartile_size = 0.0;
  std::vector<Index> cluster_sizes;  // indexed by cluster id
};

// Quantiles use linear interpolation on the sorted size sequence.
PartitionStats partition_stats(const WeightedGraph& g, const Partition& p);

// Linear-interpolation quantile of an ascending sequence, q in [0, 1].
double interpolated_quantile(std::span<const double> sorted, double q);

}  // namespace graphsom
