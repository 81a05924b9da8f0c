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

// Batch self-organizing maps on a rectangular grid.
//
// Prototypes are always held as convex combinations of the input items
// (gamma, one row per unit). In the kernel variant the items live in the
// feature space of a kernel matrix and every distance is expanded through
// the kernel; the Euclidean variant works on explicit coordinates with the
// same schedule and random stream, so feeding it X and the kernel variant
// X * X^T trains the same map.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "graphsom/graph.hpp"
#include "graphsom/linalg.hpp"

namespace graphsom {

class SomGrid {
 public:
  struct Coord {
    Index row;
    Index col;
  };

  // Throws ValidationError unless rows, cols >= 1.
  SomGrid(Index rows, Index cols);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index unit_count() const { return rows_ * cols_; }

  // Units are numbered row-major.
  Coord coord(Index unit) const { return {unit / cols_, unit % cols_}; }
  Index unit_at(Index row, Index col) const { return row * cols_ + col; }

  // Euclidean distance between unit coordinates.
  double distance(Index a, Index b) const;

  // Up to four lattice neighbors (up, left, right, down), in that order.
  std::vector<Index> neighbors(Index unit) const;

  friend bool operator==(const SomGrid&, const SomGrid&) = default;

 private:
  Index rows_;
  Index cols_;
};

// How an item picks its best-matching unit from the current prototypes.
enum class BmuRule {
  // Unit with the nearest prototype.
  nearest,
  // Unit b minimizing sum_m h(delta(b, m)) * d(x, w_m), the neighborhood-
  // weighted distortion. Every epoch is then a descent step on the extended
  // distortion energy, but on near-identity kernels the map tends to
  // collapse onto a few units.
  local_distortion,
};

// Starting prototypes.
enum class SomInit {
  // Distinct items drawn by k-means++ sampling in the (feature) space; each
  // gamma row starts as an indicator vector.
  data_samples,
  // Rows drawn from a flat Dirichlet distribution over all items.
  dirichlet,
};

struct SomOptions {
  int epochs = 100;
  BmuRule bmu_rule = BmuRule::nearest;
  SomInit init = SomInit::data_samples;
  // Independent initializations; the map with the lowest final energy is
  // kept. Ignored when initial_gamma is set.
  int restarts = 1;
  // Defaults: max(rows, cols) / 2 down to 0.5, linearly over the epochs
  // (a start below 0.5 is raised to it).
  std::optional<double> sigma_start;
  std::optional<double> sigma_end;
  std::uint64_t seed = 0;
  // unit_count x n convex weights; drawn per `init` when empty.
  std::optional<Eigen::MatrixXd> initial_gamma;
};

struct SomModel {
  SomGrid grid{1, 1};
  Eigen::MatrixXd gamma;          // unit_count x n, rows are convex weights
  std::vector<Index> assignment;  // best-matching unit of every item, final gamma
  BmuRule bmu_rule = BmuRule::nearest;
  std::vector<double> energy_trace;
  double sigma_start = 0.0;
  double sigma_end = 0.0;
  int epochs = 0;
  std::uint64_t seed = 0;

  Index item_count() const { return assignment.size(); }
  bool trained() const {
    return !assignment.empty() && gamma.rows() == static_cast<Eigen::Index>(grid.unit_count()) &&
           gamma.cols() == static_cast<Eigen::Index>(assignment.size());
  }
};

// Neighborhood width used at `epoch` (0-based) by the linear schedule.
double radius_at(double sigma_start, double sigma_end, int epoch, int epochs);

// Gaussian neighborhood exp(-d^2 / (2 sigma^2)).
double neighborhood(double grid_distance, double sigma);

SomModel batch_kernel_som(const KernelMatrix& k, const SomGrid& grid, const SomOptions& options);
SomModel batch_som(const Eigen::MatrixXd& points, const SomGrid& grid, const SomOptions& options);

// batch_som on spectral_embedding(laplacian(g), p).
SomModel spectral_som(const WeightedGraph& g, Index p, const SomGrid& grid,
                      const SomOptions& options);

struct UMatrix {
  Index rows = 0;
  Index cols = 0;
  std::vector<double> values;  // row-major, one per unit

  double at(Index row, Index col) const { return values.at(row * cols + col); }
  // Bilinear interpolation between unit centers, (rows * factor) x
  // (cols * factor). Presentation only.
  Eigen::MatrixXd upsample(int factor) const;
};

// Mean prototype distance from each unit to its lattice neighbors. Use the
// same kernel (or coordinates) the model was trained on.
UMatrix u_matrix(const SomModel& model, const KernelMatrix& k);
UMatrix u_matrix(const SomModel& model, const Eigen::MatrixXd& points);

struct SomPartition {
  Partition partition;
  std::vector<Index> cluster_units;  // source unit of each cluster id
};

// Nonempty units become clusters, numbered in row-major grid order.
SomPartition som_partition(const SomModel& model, std::string method_tag = "som",
                           Params params = {});

}  // namespace graphsom
