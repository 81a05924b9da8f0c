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

// Weighted undirected graphs, their Laplacians and vertex partitions.
//
// The weight matrix is stored densely (the toolkit targets graphs of a few
// hundred to a few thousand vertices); adjacency lists are kept alongside for
// traversal and layout.

#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "graphsom/summary_graph.hpp"

namespace graphsom {

using Index = std::size_t;

// Square matrix that is exactly symmetric (entries[i][j] == entries[j][i]).
class SymmetricMatrix {
 public:
  // Throws ValidationError unless `entries` is square, non-empty and exactly
  // symmetric.
  explicit SymmetricMatrix(Eigen::MatrixXd entries);

  static SymmetricMatrix zero(Index n);
  // Builds from the lower triangle, mirroring it upward.
  static SymmetricMatrix from_lower(const Eigen::MatrixXd& entries);

  Index order() const { return static_cast<Index>(m_.rows()); }
  double operator()(Index i, Index j) const { return m_(i, j); }
  const Eigen::MatrixXd& matrix() const { return m_; }

 private:
  Eigen::MatrixXd m_;
};

struct Edge {
  Index source = 0;
  Index target = 0;
  double weight = 1.0;
};

class WeightedGraph {
 public:
  struct Neighbor {
    Index vertex;
    double weight;
  };

  // Repeated pairs (in either orientation) have their weights summed.
  // Throws ValidationError on duplicate labels, out-of-range endpoints,
  // self-loops, and negative or non-finite weights. Zero-weight edges are
  // ignored.
  WeightedGraph(std::vector<std::string> labels, std::span<const Edge> edges);

  Index vertex_count() const { return labels_.size(); }
  // Number of unordered vertex pairs with positive weight.
  Index edge_count() const { return edge_count_; }

  const std::string& label(Index i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<Index> find(std::string_view label) const;

  double weight(Index i, Index j) const { return weights_(i, j); }
  const Eigen::MatrixXd& weights() const { return weights_; }
  std::span<const Neighbor> neighbors(Index i) const { return adjacency_.at(i); }

  // Sum of w[i][j] over unordered pairs i < j.
  double total_weight() const { return total_weight_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, Index> index_;
  Eigen::MatrixXd weights_;
  std::vector<std::vector<Neighbor>> adjacency_;
  Index edge_count_ = 0;
  double total_weight_ = 0.0;
};

enum class SelfLoopPolicy { drop, error };

struct LoadOptions {
  SelfLoopPolicy on_self_loop = SelfLoopPolicy::drop;
  // Receives one message per dropped self-loop. May be empty.
  std::function<void(const std::string&)> on_warning;
};

// Reads `src<TAB>dst[<TAB>weight]` lines. Blank lines and lines starting with
// '#' are skipped. Vertices are indexed in first-appearance order.
// Throws ParseError (with line number) on malformed input.
WeightedGraph load_edge_list(std::istream& in, const LoadOptions& options = {});
WeightedGraph load_edge_list(const std::filesystem::path& path,
                             const LoadOptions& options = {});

double degree(const WeightedGraph& g, Index i);
SymmetricMatrix laplacian(const WeightedGraph& g);

// Free-form provenance record attached to a partition (method parameters).
using Params = std::map<std::string, std::string>;

// Assignment of every vertex to one of k clusters, ids contiguous in 0..k-1.
class Partition {
 public:
  // Throws ValidationError if the ids are not exactly {0..k-1}.
  explicit Partition(std::vector<Index> assignment, std::string method_tag = {},
                     Params params = {});

  // Drops empty ids and renumbers the rest preserving their relative order.
  static Partition compact(std::span<const Index> raw, std::string method_tag = {},
                           Params params = {});

  Index size() const { return assignment_.size(); }
  Index cluster_count() const { return k_; }
  Index cluster_of(Index vertex) const { return assignment_.at(vertex); }
  std::span<const Index> assignment() const { return assignment_; }

  std::vector<Index> cluster_sizes() const;
  std::vector<std::vector<Index>> members() const;

  const std::string& method_tag() const { return method_tag_; }
  const Params& params() const { return params_; }
  void set_provenance(std::string method_tag, Params params);

  bool same_clusters_as(const Partition& other) const;

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.assignment_ == b.assignment_;
  }

 private:
  std::vector<Index> assignment_;
  Index k_ = 0;
  std::string method_tag_;
  Params params_;
};

// Components over positive-weight edges, numbered by smallest member index.
Partition connected_components(const WeightedGraph& g);

ClusterSummaryGraph summary_graph(const WeightedGraph& g, const Partition& p);

}  // namespace graphsom
