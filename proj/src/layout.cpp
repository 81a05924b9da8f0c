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

#include "graphsom/layout.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "graphsom/error.hpp"
#include "rng.hpp"

namespace graphsom {

namespace {

void require_frame(const Rect& frame) {
  const bool ok = std::isfinite(frame.x) && std::isfinite(frame.y) && std::isfinite(frame.width) &&
                  std::isfinite(frame.height) && frame.width > 0.0 && frame.height > 0.0;
  if (!ok) {
    throw ValidationError(fmt::format("degenerate layout frame ({}, {}, {}, {})", frame.x, frame.y,
                                      frame.width, frame.height));
  }
}

Point clamp_to(Point p, const Rect& r) {
  return {std::clamp(p.x, r.x, r.x + r.width), std::clamp(p.y, r.y, r.y + r.height)};
}

Point random_point(const Rect& r, detail::Rng& rng) {
  const double u = rng.uniform();
  const double v = rng.uniform();
  return {r.x + u * r.width, r.y + v * r.height};
}

// Separation vector for a pair; coincident points get a fixed tiny offset
// whose direction depends only on the pair indices.
Point separation(Point a, Point b, Index i, Index j, double floor, double& length) {
  Point delta{a.x - b.x, a.y - b.y};
  length = std::hypot(delta.x, delta.y);
  if (length < floor) {
    const double angle =
        2.0 * std::numbers::pi * static_cast<double>((i * 31 + j * 17) % 360) / 360.0;
    delta = {floor * std::cos(angle), floor * std::sin(angle)};
    length = floor;
  }
  return delta;
}

void move_capped(Point& p, Point disp, double cap) {
  const double len = std::hypot(disp.x, disp.y);
  if (len <= 0.0) return;
  const double step = std::min(len, cap) / len;
  p.x += disp.x * step;
  p.y += disp.y * step;
}

}  // namespace

std::vector<double> glyph_radii(const ClusterSummaryGraph& sg, double max_radius) {
  Index largest = 0;
  for (const auto& node : sg.nodes) largest = std::max(largest, node.vertex_count);
  std::vector<double> radii;
  radii.reserve(sg.nodes.size());
  const double unit = largest > 0 ? max_radius / std::sqrt(static_cast<double>(largest)) : 0.0;
  for (const auto& node : sg.nodes) {
    radii.push_back(unit * std::sqrt(static_cast<double>(node.vertex_count)));
  }
  return radii;
}

std::vector<double> edge_widths(std::span<const double> weights) {
  double largest = 0.0;
  for (double w : weights) largest = std::max(largest, w);
  std::vector<double> widths;
  widths.reserve(weights.size());
  for (double w : weights) widths.push_back(largest > 0.0 ? kMaxEdgeWidth * w / largest : 0.0);
  return widths;
}

std::vector<Rect> grid_cells(const SomGrid& grid, const Rect& frame) {
  require_frame(frame);
  const double cw = frame.width / static_cast<double>(grid.cols());
  const double ch = frame.height / static_cast<double>(grid.rows());
  std::vector<Rect> cells;
  cells.reserve(grid.unit_count());
  for (Index u = 0; u < grid.unit_count(); ++u) {
    const auto c = grid.coord(u);
    cells.push_back({frame.x + static_cast<double>(c.col) * cw,
                     frame.y + static_cast<double>(c.row) * ch, cw, ch});
  }
  return cells;
}

namespace {

void add_summary_edges(const ClusterSummaryGraph& sg, LayoutScene& scene) {
  std::vector<double> weights;
  weights.reserve(sg.edges.size());
  for (const auto& e : sg.edges) weights.push_back(e.inter_weight);
  const auto widths = edge_widths(weights);
  for (std::size_t i = 0; i < sg.edges.size(); ++i) {
    scene.edges.push_back({sg.edges[i].first, sg.edges[i].second, weights[i], widths[i]});
  }
}

void add_summary_items(const ClusterSummaryGraph& sg, double max_radius, LayoutScene& scene) {
  const auto radii = glyph_radii(sg, max_radius);
  for (std::size_t c = 0; c < sg.nodes.size(); ++c) {
    scene.items.push_back({fmt::format("C{}", sg.nodes[c].cluster), {}, radii[c],
                           sg.nodes[c].cluster, sg.nodes[c].vertex_count});
  }
}

}  // namespace

LayoutScene force_directed_layout(const ClusterSummaryGraph& sg, const ForceLayoutOptions& options) {
  require_frame(options.frame);
  if (sg.nodes.empty()) throw ValidationError("summary graph has no nodes");
  if (options.iterations < 1) throw ValidationError("iterations must be at least 1");
  for (const auto& e : sg.edges) {
    if (e.first >= sg.nodes.size() || e.second >= sg.nodes.size() || e.first == e.second) {
      throw ValidationError("summary edge references an invalid cluster pair");
    }
  }

  const Rect& frame = options.frame;
  const Index n = sg.nodes.size();
  LayoutScene scene;
  scene.frame = frame;
  add_summary_items(sg, 0.125 * std::min(frame.width, frame.height), scene);
  add_summary_edges(sg, scene);

  std::vector<Point> pos(n, frame.center());
  if (n > 1) {
    detail::Rng rng(options.seed);
    for (auto& p : pos) p = random_point(frame, rng);

    const double ideal = std::sqrt(frame.width * frame.height / static_cast<double>(n));
    const double floor = 1e-6 * ideal;
    const double start_temp = std::hypot(frame.width, frame.height) / 10.0;
    double max_weight = 0.0;
    for (const auto& e : sg.edges) max_weight = std::max(max_weight, e.inter_weight);

    std::vector<Point> disp(n);
    for (int it = 0; it < options.iterations; ++it) {
      const double temp =
          start_temp * (1.0 - static_cast<double>(it) / static_cast<double>(options.iterations));
      std::fill(disp.begin(), disp.end(), Point{});
      for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
          double d = 0.0;
          const Point delta = separation(pos[i], pos[j], i, j, floor, d);
          const double f = ideal * ideal / d;
          disp[i].x += delta.x / d * f;
          disp[i].y += delta.y / d * f;
          disp[j].x -= delta.x / d * f;
          disp[j].y -= delta.y / d * f;
        }
      }
      for (const auto& e : sg.edges) {
        double d = 0.0;
        const Point delta = separation(pos[e.first], pos[e.second], e.first, e.second, floor, d);
        const double f = d * d / ideal * (e.inter_weight / max_weight);
        disp[e.first].x -= delta.x / d * f;
        disp[e.first].y -= delta.y / d * f;
        disp[e.second].x += delta.x / d * f;
        disp[e.second].y += delta.y / d * f;
      }
      for (Index i = 0; i < n; ++i) {
        move_capped(pos[i], disp[i], temp);
        pos[i] = clamp_to(pos[i], frame);
      }
    }
  }
  for (Index i = 0; i < n; ++i) scene.items[i].position = pos[i];
  return scene;
}

LayoutScene som_map_scene(const SomModel& model, const ClusterSummaryGraph& sg, const Rect& frame) {
  require_frame(frame);
  if (!model.trained()) throw ValidationError("SOM model is not trained");
  const SomGrid& grid = model.grid;
  std::vector<Index> counts(grid.unit_count(), 0);
  for (Index u : model.assignment) {
    if (u >= grid.unit_count()) throw ValidationError("model assigns a vertex outside its grid");
    ++counts[u];
  }
  std::vector<Index> units;
  for (Index u = 0; u < grid.unit_count(); ++u) {
    if (counts[u] > 0) units.push_back(u);
  }
  if (units.size() != sg.nodes.size()) {
    throw ValidationError(fmt::format("summary graph has {} clusters but the map has {} nonempty units",
                                      sg.nodes.size(), units.size()));
  }
  for (std::size_t c = 0; c < units.size(); ++c) {
    if (sg.nodes[c].vertex_count != counts[units[c]]) {
      throw ValidationError(fmt::format("cluster {} has {} vertices but unit {} holds {}", c,
                                        sg.nodes[c].vertex_count, units[c], counts[units[c]]));
    }
  }

  const auto cells = grid_cells(grid, frame);
  LayoutScene scene;
  scene.frame = frame;
  scene.cell_regions = cells;
  const double max_radius = std::min(0.125 * std::min(frame.width, frame.height),
                                     0.45 * std::min(cells[0].width, cells[0].height));
  add_summary_items(sg, max_radius, scene);
  add_summary_edges(sg, scene);
  for (std::size_t c = 0; c < units.size(); ++c) scene.items[c].position = cells[units[c]].center();
  return scene;
}

LayoutScene constrained_full_layout(const WeightedGraph& g, const SomModel& model,
                                    const ConstrainedLayoutOptions& options) {
  require_frame(options.frame);
  if (options.iterations < 1) throw ValidationError("iterations must be at least 1");
  if (!(options.cell_margin >= 0.0 && options.cell_margin < 0.5)) {
    throw ValidationError("cell margin must lie in [0, 0.5)");
  }
  if (!model.trained()) throw ValidationError("SOM model is not trained");
  const Index n = g.vertex_count();
  if (model.item_count() != n) {
    throw ValidationError(fmt::format("model covers {} vertices, graph has {}", model.item_count(), n));
  }
  const SomGrid& grid = model.grid;
  for (Index u : model.assignment) {
    if (u >= grid.unit_count()) {
      throw ValidationError(fmt::format("vertex assigned to unit {} outside the {}x{} grid", u,
                                        grid.rows(), grid.cols()));
    }
  }

  LayoutScene scene;
  scene.frame = options.frame;
  scene.cell_regions = grid_cells(grid, options.frame);
  std::vector<Rect> inner;
  for (const auto& cell : scene.cell_regions) inner.push_back(cell.inset(options.cell_margin));

  std::vector<std::vector<Index>> members(grid.unit_count());
  for (Index v = 0; v < n; ++v) members[model.assignment[v]].push_back(v);
  std::vector<double> ideal(grid.unit_count(), 0.0);
  std::vector<double> start_temp(grid.unit_count(), 0.0);
  for (Index u = 0; u < grid.unit_count(); ++u) {
    if (members[u].empty()) continue;
    ideal[u] = std::sqrt(inner[u].width * inner[u].height / static_cast<double>(members[u].size()));
    start_temp[u] = std::hypot(inner[u].width, inner[u].height) / 10.0;
  }

  detail::Rng rng(options.seed);
  std::vector<Point> pos(n);
  for (Index v = 0; v < n; ++v) {
    const Index u = model.assignment[v];
    pos[v] = random_point(inner[u], rng);
    if (members[u].size() == 1) pos[v] = inner[u].center();
  }

  double max_weight = 0.0;
  for (Index j = 0; j < n; ++j) {
    for (const auto& nb : g.neighbors(j)) max_weight = std::max(max_weight, nb.weight);
  }

  std::vector<Point> disp(n);
  for (int it = 0; it < options.iterations; ++it) {
    const double cooling = 1.0 - static_cast<double>(it) / static_cast<double>(options.iterations);
    std::fill(disp.begin(), disp.end(), Point{});
    for (Index u = 0; u < grid.unit_count(); ++u) {
      const auto& m = members[u];
      const double k = ideal[u];
      for (std::size_t a = 0; a < m.size(); ++a) {
        for (std::size_t b = a + 1; b < m.size(); ++b) {
          const Index i = m[a];
          const Index j = m[b];
          double d = 0.0;
          const Point delta = separation(pos[i], pos[j], i, j, 1e-6 * k, d);
          const double f = k * k / d;
          disp[i].x += delta.x / d * f;
          disp[i].y += delta.y / d * f;
          disp[j].x -= delta.x / d * f;
          disp[j].y -= delta.y / d * f;
        }
      }
    }
    for (Index j = 0; j < n; ++j) {
      for (const auto& nb : g.neighbors(j)) {
        const Index i = nb.vertex;
        if (i >= j) continue;
        const double dx = pos[i].x - pos[j].x;
        const double dy = pos[i].y - pos[j].y;
        const double d = std::hypot(dx, dy);
        if (d <= 0.0) continue;
        const double scale = nb.weight / max_weight;
        const double fi = d / ideal[model.assignment[i]] * scale;  // (d^2 / k) / d
        const double fj = d / ideal[model.assignment[j]] * scale;
        disp[i].x -= dx * fi;
        disp[i].y -= dy * fi;
        disp[j].x += dx * fj;
        disp[j].y += dy * fj;
      }
    }
    for (Index v = 0; v < n; ++v) {
      const Index u = model.assignment[v];
      move_capped(pos[v], disp[v], start_temp[u] * cooling);
      pos[v] = clamp_to(pos[v], inner[u]);
    }
  }

  const auto som = som_partition(model);
  const auto sizes = som.partition.cluster_sizes();
  for (Index v = 0; v < n; ++v) {
    const Index c = som.partition.cluster_of(v);
    scene.items.push_back({g.label(v), pos[v], options.vertex_radius, c, sizes[c]});
  }
  std::vector<double> weights;
  std::vector<std::pair<Index, Index>> pairs;
  for (Index j = 0; j < n; ++j) {
    for (const auto& nb : g.neighbors(j)) {
      if (nb.vertex >= j) continue;
      pairs.emplace_back(nb.vertex, j);
      weights.push_back(nb.weight);
    }
  }
  const auto widths = edge_widths(weights);
  for (std::size_t e = 0; e < pairs.size(); ++e) {
    scene.edges.push_back({pairs[e].first, pairs[e].second, weights[e], widths[e]});
  }
  return scene;
}

}  // namespace graphsom
