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

#pragma once

#include <cstddef>
#include <vector>

namespace graphsom {

// One glyph per cluster; edges carry the total weight between two clusters.
struct ClusterSummaryGraph {
  struct Node {
    std::size_t cluster = 0;
    std::size_t vertex_count = 0;
    double intra_weight = 0.0;
  };
  struct Edge {
    std::size_t first = 0;   // cluster id, first < second
    std::size_t second = 0;
    double inter_weight = 0.0;
  };

  std::vector<Node> nodes;  // nodes[c].cluster == c
  std::vector<Edge> edges;  // sorted by (first, second), inter_weight > 0

  std::size_t total_vertices() const {
    std::size_t n = 0;
    for (const auto& node : nodes) n += node.vertex_count;
    return n;
  }
};

}  // namespace graphsom
