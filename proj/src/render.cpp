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

// SVG and DOT writers. All numbers go through fixed-precision formatting so
// identical scenes produce identical bytes.

#include <algorithm>
#include <array>
#include <iterator>
#include <string>

#include <fmt/format.h>

#include "graphsom/error.hpp"
#include "graphsom/layout.hpp"

namespace graphsom {

namespace {

constexpr std::array<const char*, 10> kCategorical = {
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fill_for(Index cluster, Palette palette) {
  if (palette == Palette::grayscale) {
    const int level = 64 + static_cast<int>((cluster * 37) % 160);
    return fmt::format("#{0:02x}{0:02x}{0:02x}", level);
  }
  return kCategorical[cluster % kCategorical.size()];
}

// Light for small values, dark for large ones.
std::string raster_fill(double value, double max_value) {
  const double t = max_value > 0.0 ? std::clamp(value / max_value, 0.0, 1.0) : 0.0;
  const int level = static_cast<int>(std::lround(245.0 - 170.0 * t));
  return fmt::format("#{0:02x}{0:02x}{0:02x}", level);
}

}  // namespace

std::string render_svg(const LayoutScene& scene, const SvgOptions& options) {
  const Rect& f = scene.frame;
  std::string out;
  auto it = std::back_inserter(out);
  fmt::format_to(it, "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n");
  fmt::format_to(it,
                 "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{:.3f}\" "
                 "height=\"{:.3f}\" viewBox=\"{:.3f} {:.3f} {:.3f} {:.3f}\">\n",
                 f.width, f.height, f.x, f.y, f.width, f.height);
  fmt::format_to(it,
                 "<rect id=\"background\" x=\"{:.3f}\" y=\"{:.3f}\" width=\"{:.3f}\" "
                 "height=\"{:.3f}\" fill=\"#ffffff\"/>\n",
                 f.x, f.y, f.width, f.height);

  if (options.umatrix_raster != nullptr && options.umatrix_raster->size() > 0) {
    const Eigen::MatrixXd& r = *options.umatrix_raster;
    const double pw = f.width / static_cast<double>(r.cols());
    const double ph = f.height / static_cast<double>(r.rows());
    const double max_value = r.maxCoeff();
    out += "<g id=\"umatrix\" shape-rendering=\"crispEdges\">\n";
    for (Eigen::Index y = 0; y < r.rows(); ++y) {
      for (Eigen::Index x = 0; x < r.cols(); ++x) {
        fmt::format_to(it,
                       "<rect x=\"{:.3f}\" y=\"{:.3f}\" width=\"{:.3f}\" height=\"{:.3f}\" "
                       "fill=\"{}\"/>\n",
                       f.x + static_cast<double>(x) * pw, f.y + static_cast<double>(y) * ph, pw, ph,
                       raster_fill(r(y, x), max_value));
      }
    }
    out += "</g>\n";
  }

  if (!scene.cell_regions.empty()) {
    out += "<g id=\"cells\" fill=\"none\" stroke=\"#c8c8c8\" stroke-width=\"1\">\n";
    for (const auto& c : scene.cell_regions) {
      fmt::format_to(it, "<rect x=\"{:.3f}\" y=\"{:.3f}\" width=\"{:.3f}\" height=\"{:.3f}\"/>\n",
                     c.x, c.y, c.width, c.height);
    }
    out += "</g>\n";
  }

  out += "<g id=\"edges\" stroke=\"#7f7f7f\" stroke-opacity=\"0.6\" stroke-linecap=\"round\">\n";
  for (const auto& e : scene.edges) {
    if (e.source >= scene.items.size() || e.target >= scene.items.size()) {
      throw ValidationError("scene edge references a missing item");
    }
    const Point a = scene.items[e.source].position;
    const Point b = scene.items[e.target].position;
    fmt::format_to(it,
                   "<line x1=\"{:.3f}\" y1=\"{:.3f}\" x2=\"{:.3f}\" y2=\"{:.3f}\" "
                   "stroke-width=\"{:.3f}\"/>\n",
                   a.x, a.y, b.x, b.y, e.width);
  }
  out += "</g>\n";

  out += "<g id=\"glyphs\" stroke=\"#333333\" stroke-width=\"0.5\">\n";
  for (const auto& item : scene.items) {
    fmt::format_to(it, "<circle cx=\"{:.3f}\" cy=\"{:.3f}\" r=\"{:.3f}\" fill=\"{}\"/>\n",
                   item.position.x, item.position.y, item.radius,
                   fill_for(item.cluster, options.palette));
  }
  out += "</g>\n";

  if (options.labels) {
    out += "<g id=\"labels\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#000000\">\n";
    for (const auto& item : scene.items) {
      if (item.group_size > options.label_threshold) continue;
      fmt::format_to(it, "<text x=\"{:.3f}\" y=\"{:.3f}\">{}</text>\n",
                     item.position.x + item.radius + 2.0, item.position.y + 3.0,
                     xml_escape(item.label));
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string dot_quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

std::string node_geometry(const LayoutScene* scene, Index item) {
  if (scene == nullptr || item >= scene->items.size()) return {};
  const auto& it = scene->items[item];
  // Graphviz positions are in points, sizes in inches.
  return fmt::format(", pos=\"{:.3f},{:.3f}!\", width=\"{:.4f}\", fixedsize=true", it.position.x,
                     0.0 - it.position.y, 2.0 * it.radius / 72.0);
}

}  // namespace

std::string export_dot(const ClusterSummaryGraph& sg, const LayoutScene* scene) {
  std::string out = "graph summary {\n  node [shape=circle];\n";
  auto it = std::back_inserter(out);
  for (const auto& node : sg.nodes) {
    const std::string label =
        scene != nullptr && node.cluster < scene->items.size() ? scene->items[node.cluster].label
                                                                : fmt::format("C{}", node.cluster);
    fmt::format_to(it, "  {} [label={}, vertex_count=\"{}\", intra_weight=\"{}\"{}];\n",
                   dot_quote(std::to_string(node.cluster)), dot_quote(label), node.vertex_count,
                   node.intra_weight, node_geometry(scene, node.cluster));
  }
  for (std::size_t e = 0; e < sg.edges.size(); ++e) {
    const auto& edge = sg.edges[e];
    std::string width;
    if (scene != nullptr && e < scene->edges.size()) {
      width = fmt::format(", penwidth=\"{:.3f}\"", scene->edges[e].width);
    }
    fmt::format_to(it, "  {} -- {} [weight=\"{}\"{}];\n", dot_quote(std::to_string(edge.first)),
                   dot_quote(std::to_string(edge.second)), edge.inter_weight, width);
  }
  out += "}\n";
  return out;
}

std::string export_dot(const WeightedGraph& g, const LayoutScene* scene) {
  std::string out = "graph network {\n  node [shape=circle];\n";
  auto it = std::back_inserter(out);
  for (Index v = 0; v < g.vertex_count(); ++v) {
    fmt::format_to(it, "  {} [degree=\"{}\"{}];\n", dot_quote(g.label(v)), degree(g, v),
                   node_geometry(scene, v));
  }
  for (Index j = 0; j < g.vertex_count(); ++j) {
    for (const auto& nb : g.neighbors(j)) {
      if (nb.vertex >= j) continue;
      fmt::format_to(it, "  {} -- {} [weight=\"{}\"];\n", dot_quote(g.label(nb.vertex)),
                     dot_quote(g.label(j)), nb.weight);
    }
  }
  out += "}\n";
  return out;
}

}  // namespace graphsom
