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

// Graph drawing: force-directed placement of cluster glyphs, glyphs pinned
// to a trained map, whole-graph drawing confined to map cells, and SVG/DOT
// output.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "graphsom/graph.hpp"
#include "graphsom/som.hpp"
#include "graphsom/summary_graph.hpp"

namespace graphsom {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Rect {
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;

  bool contains(Point p) const {
    return p.x >= x && p.x <= x + width && p.y >= y && p.y <= y + height;
  }
  Point center() const { return {x + 0.5 * width, y + 0.5 * height}; }
  // Shrinks each side by `fraction` of the corresponding extent.
  Rect inset(double fraction) const {
    return {x + fraction * width, y + fraction * height, (1.0 - 2.0 * fraction) * width,
            (1.0 - 2.0 * fraction) * height};
  }
};

// One drawn disc: a cluster glyph, or a single vertex in whole-graph scenes.
struct SceneItem {
  std::string label;
  Point position;
  double radius = 0.0;
  Index cluster = 0;
  // Vertices in the item's cluster; drives the label threshold.
  Index group_size = 0;
};

struct SceneEdge {
  Index source = 0;  // item indices
  Index target = 0;
  double weight = 0.0;
  double width = 0.0;
};

struct LayoutScene {
  Rect frame;
  std::vector<SceneItem> items;
  std::vector<SceneEdge> edges;
  std::vector<Rect> cell_regions;  // per grid unit, constrained scenes only
};

inline constexpr double kMaxEdgeWidth = 6.0;

// Glyph radius proportional to sqrt(vertex_count), largest equal to
// max_radius.
std::vector<double> glyph_radii(const ClusterSummaryGraph& sg, double max_radius);
// Edge widths proportional to weight, largest equal to kMaxEdgeWidth.
std::vector<double> edge_widths(std::span<const double> weights);

struct ForceLayoutOptions {
  int iterations = 500;
  Rect frame{0.0, 0.0, 1000.0, 1000.0};
  std::uint64_t seed = 0;
};

// Fruchterman-Reingold placement of the summary graph inside the frame.
LayoutScene force_directed_layout(const ClusterSummaryGraph& sg, const ForceLayoutOptions& options);

// Glyphs at the centers of their map units. `sg` must come from
// som_partition(model). The frame is tiled by the grid cells.
LayoutScene som_map_scene(const SomModel& model, const ClusterSummaryGraph& sg, const Rect& frame);

struct ConstrainedLayoutOptions {
  int iterations = 1000;
  Rect frame{0.0, 0.0, 1000.0, 1000.0};
  std::uint64_t seed = 0;
  // Inner margin of each cell, as a fraction of the cell extent.
  double cell_margin = 0.05;
  double vertex_radius = 3.0;
};

// Every vertex of g confined to the cell of its map unit; FR attraction on
// all edges, repulsion between vertices sharing a cell.
LayoutScene constrained_full_layout(const WeightedGraph& g, const SomModel& model,
                                    const ConstrainedLayoutOptions& options);

// Frame rectangles of the grid cells, row-major.
std::vector<Rect> grid_cells(const SomGrid& grid, const Rect& frame);

// ---------------------------------------------------------------------------
// Output

enum class Palette { categorical, grayscale };

struct SvgOptions {
  bool labels = true;
  Index label_threshold = 3;
  Palette palette = Palette::categorical;
  // Background raster drawn under everything else, stretched over the frame.
  const Eigen::MatrixXd* umatrix_raster = nullptr;
};

std::string render_svg(const LayoutScene& scene, const SvgOptions& options = {});

// DOT text for a summary graph or a whole graph. With a scene, node
// positions and sizes are embedded as attributes. scene may be null.
std::string export_dot(const ClusterSummaryGraph& sg, const LayoutScene* scene = nullptr);
std::string export_dot(const WeightedGraph& g, const LayoutScene* scene = nullptr);

// Double-quoted DOT identifier with '"' and '\' escaped.
std::string dot_quote(std::string_view text);

}  // namespace graphsom
