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

#include <doctest.h>

#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <string>

#include "graphsom/error.hpp"
#include "graphsom/layout.hpp"
#include "graphsom/linalg.hpp"
#include "graphsom/som.hpp"
#include "support/fixtures.hpp"

using namespace graphsom;
using graphsom::testing::random_graph;

namespace {

// Recognizer for the subset of the DOT language we emit:
//   graph ID { stmt* }   stmt := ID attrs? ; | ID -- ID attrs? ; | node attrs ;
// IDs are plain identifiers, numerals or double-quoted strings with \" and \\.
class DotReader {
 public:
  explicit DotReader(std::string text) : s_(std::move(text)) {}

  struct Result {
    std::map<std::string, std::map<std::string, std::string>> nodes;
    std::vector<std::pair<std::string, std::string>> edges;
  };

  std::optional<Result> read() {
    Result r;
    if (!keyword("graph")) return std::nullopt;
    if (!id()) return std::nullopt;
    if (!punct("{")) return std::nullopt;
    while (!punct("}")) {
      if (at_end()) return std::nullopt;
      if (keyword("node")) {
        if (!attrs().has_value() || !punct(";")) return std::nullopt;
        continue;
      }
      auto a = id();
      if (!a) return std::nullopt;
      if (punct("--")) {
        auto b = id();
        if (!b) return std::nullopt;
        if (peek('[') && !attrs().has_value()) return std::nullopt;
        r.edges.emplace_back(*a, *b);
      } else {
        std::map<std::string, std::string> list;
        if (peek('[')) {
          auto parsed = attrs();
          if (!parsed) return std::nullopt;
          list = *parsed;
        }
        r.nodes[*a] = list;
      }
      if (!punct(";")) return std::nullopt;
    }
    skip();
    if (!at_end()) return std::nullopt;
    return r;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip();
    return pos_ >= s_.size();
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool punct(const std::string& p) {
    skip();
    if (s_.compare(pos_, p.size(), p) != 0) return false;
    pos_ += p.size();
    return true;
  }
  bool keyword(const std::string& k) {
    skip();
    const std::size_t save = pos_;
    auto word = id();
    if (word && *word == k) return true;
    pos_ = save;
    return false;
  }
  std::optional<std::string> id() {
    skip();
    if (pos_ >= s_.size()) return std::nullopt;
    if (s_[pos_] == '"') {
      std::string out;
      ++pos_;
      while (pos_ < s_.size() && s_[pos_] != '"') {
        if (s_[pos_] == '\\' && pos_ + 1 < s_.size() && (s_[pos_ + 1] == '"' || s_[pos_ + 1] == '\\')) {
          ++pos_;
        }
        out += s_[pos_++];
      }
      if (pos_ >= s_.size()) return std::nullopt;
      ++pos_;
      return out;
    }
    const std::size_t start = pos_;
    const bool numeral = s_[pos_] == '-' || s_[pos_] == '.' || std::isdigit(static_cast<unsigned char>(s_[pos_]));
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      const bool ok = numeral ? (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || (c == '-' && pos_ == start))
                              : (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
      if (!ok) break;
      ++pos_;
    }
    if (pos_ == start) return std::nullopt;
    return s_.substr(start, pos_ - start);
  }
  std::optional<std::map<std::string, std::string>> attrs() {
    std::map<std::string, std::string> out;
    if (!punct("[")) return std::nullopt;
    while (!punct("]")) {
      auto key = id();
      if (!key || !punct("=")) return std::nullopt;
      auto value = id();
      if (!value) return std::nullopt;
      out[*key] = *value;
      punct(",");
    }
    return out;
  }

  std::string s_;
  std::size_t pos_ = 0;
};

ClusterSummaryGraph random_summary(std::uint64_t seed, Index clusters = 8) {
  const auto g = random_graph(60, 150, seed);
  testing::TestRng rng(seed);
  std::vector<Index> raw(60);
  for (auto& r : raw) r = rng.index(clusters);
  return summary_graph(g, Partition::compact(raw));
}

SomModel trained_model(const WeightedGraph& g, Index rows, Index cols, std::uint64_t seed) {
  SomOptions o;
  o.epochs = 30;
  o.seed = seed;
  o.restarts = 3;
  return batch_kernel_som(heat_kernel(laplacian(g), kDefaultBeta), SomGrid(rows, cols), o);
}

bool finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

std::size_t find_or_npos(const std::string& s, const std::string& what) { return s.find(what); }

}  // namespace

TEST_CASE("glyph radii follow the square root of cluster size") {
  const auto sg = random_summary(3);
  const auto r = glyph_radii(sg, 40.0);
  double largest = 0.0;
  for (double v : r) largest = std::max(largest, v);
  CHECK(largest == doctest::Approx(40.0).epsilon(1e-15));
  for (Index a = 0; a < r.size(); ++a) {
    for (Index b = 0; b < r.size(); ++b) {
      const double expected = std::sqrt(static_cast<double>(sg.nodes[a].vertex_count) /
                                        static_cast<double>(sg.nodes[b].vertex_count));
      CHECK(std::abs(r[a] / r[b] - expected) <= 1e-9);
    }
  }
}

TEST_CASE("edge widths are proportional to weight") {
  const std::vector<double> w{1.0, 2.5, 0.3, 10.0};
  const auto widths = edge_widths(w);
  CHECK(widths[3] == doctest::Approx(kMaxEdgeWidth));
  for (Index a = 0; a < w.size(); ++a) {
    for (Index b = 0; b < w.size(); ++b) CHECK(std::abs(widths[a] / widths[b] - w[a] / w[b]) <= 1e-9);
  }
}

TEST_CASE("force layout: finite, inside the frame, deterministic") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto sg = random_summary(seed);
    ForceLayoutOptions o;
    o.seed = seed;
    o.iterations = 200;
    o.frame = {10.0, 20.0, 640.0, 480.0};
    const auto scene = force_directed_layout(sg, o);
    REQUIRE(scene.items.size() == sg.nodes.size());
    CHECK(scene.edges.size() == sg.edges.size());
    for (const auto& item : scene.items) {
      CHECK(finite(item.position));
      CHECK(o.frame.contains(item.position));
    }
    const auto again = force_directed_layout(sg, o);
    CHECK(render_svg(scene) == render_svg(again));
  }
}

TEST_CASE("force layout: width ratios and radius ratios hold in the scene") {
  const auto sg = random_summary(9);
  const auto scene = force_directed_layout(sg, {});
  for (Index e = 0; e < scene.edges.size(); ++e) {
    CHECK(std::abs(scene.edges[e].width / scene.edges[0].width -
                   sg.edges[e].inter_weight / sg.edges[0].inter_weight) <= 1e-9);
  }
  for (Index i = 0; i < scene.items.size(); ++i) {
    CHECK(std::abs(scene.items[i].radius / scene.items[0].radius -
                   std::sqrt(static_cast<double>(sg.nodes[i].vertex_count) /
                             static_cast<double>(sg.nodes[0].vertex_count))) <= 1e-9);
  }
}

TEST_CASE("force layout: doubling the frame doubles the positions") {
  const auto sg = random_summary(4);
  ForceLayoutOptions small;
  small.frame = {0.0, 0.0, 300.0, 200.0};
  small.seed = 8;
  ForceLayoutOptions big = small;
  big.frame = {0.0, 0.0, 600.0, 400.0};
  const auto a = force_directed_layout(sg, small);
  const auto b = force_directed_layout(sg, big);
  for (Index i = 0; i < a.items.size(); ++i) {
    CHECK(std::abs(2.0 * a.items[i].position.x - b.items[i].position.x) <= 1e-6);
    CHECK(std::abs(2.0 * a.items[i].position.y - b.items[i].position.y) <= 1e-6);
  }
}

TEST_CASE("force layout: two nodes settle near the ideal distance") {
  ClusterSummaryGraph sg;
  sg.nodes = {{0, 1, 0.0}, {1, 1, 0.0}};
  sg.edges = {{0, 1, 1.0}};
  ForceLayoutOptions o;
  o.iterations = 500;
  const auto scene = force_directed_layout(sg, o);
  const double ideal = std::sqrt(1000.0 * 1000.0 / 2.0);
  const double d = std::hypot(scene.items[0].position.x - scene.items[1].position.x,
                              scene.items[0].position.y - scene.items[1].position.y);
  CHECK(std::abs(d - ideal) <= 0.25 * ideal);
}

TEST_CASE("force layout rejects bad input") {
  CHECK_THROWS_AS(force_directed_layout(ClusterSummaryGraph{}, {}), ValidationError);
  ForceLayoutOptions o;
  o.iterations = 0;
  CHECK_THROWS_AS(force_directed_layout(random_summary(1), o), ValidationError);
  o = {};
  o.frame = {0, 0, 0, 10};
  CHECK_THROWS_AS(force_directed_layout(random_summary(1), o), ValidationError);
}

TEST_CASE("grid cells tile the frame") {
  const auto cells = grid_cells(SomGrid(2, 3), {0, 0, 300, 200});
  REQUIRE(cells.size() == 6);
  CHECK(cells[4].x == doctest::Approx(100.0));
  CHECK(cells[4].y == doctest::Approx(100.0));
  CHECK(cells[4].width == doctest::Approx(100.0));
  CHECK(cells[4].height == doctest::Approx(100.0));
}

TEST_CASE("map scene: glyphs at the centers of their units") {
  const auto g = random_graph(40, 100, 5);
  const auto model = trained_model(g, 3, 3, 1);
  const auto sp = som_partition(model);
  const auto sg = summary_graph(g, sp.partition);
  const Rect frame{0, 0, 900, 600};
  const auto scene = som_map_scene(model, sg, frame);
  const auto cells = grid_cells(model.grid, frame);
  REQUIRE(scene.items.size() == sp.cluster_units.size());
  for (Index c = 0; c < scene.items.size(); ++c) {
    const Point center = cells[sp.cluster_units[c]].center();
    CHECK(scene.items[c].position.x == doctest::Approx(center.x));
    CHECK(scene.items[c].position.y == doctest::Approx(center.y));
    CHECK(scene.items[c].radius <= 0.5 * std::min(cells[0].width, cells[0].height));
  }
  CHECK(scene.cell_regions.size() == 9);
}

TEST_CASE("constrained layout keeps every vertex in its cell") {
  SUBCASE("two cliques") {
    const auto g = testing::two_cliques(10);
    const auto model = trained_model(g, 1, 2, 3);
    ConstrainedLayoutOptions o;
    o.iterations = 300;
    const auto scene = constrained_full_layout(g, model, o);
    REQUIRE(scene.items.size() == 20);
    for (Index v = 0; v < 20; ++v) {
      CHECK(finite(scene.items[v].position));
      CHECK(scene.cell_regions[model.assignment[v]].contains(scene.items[v].position));
    }
  }
  SUBCASE("random 200-vertex graph") {
    const auto g = random_graph(200, 600, 77);
    const auto model = trained_model(g, 4, 4, 7);
    const auto scene = constrained_full_layout(g, model, {});
    REQUIRE(scene.items.size() == 200);
    for (Index v = 0; v < 200; ++v) {
      CHECK(scene.cell_regions[model.assignment[v]].contains(scene.items[v].position));
    }
    CHECK(render_svg(scene) == render_svg(constrained_full_layout(g, model, {})));
  }
}

TEST_CASE("constrained layout validates the model") {
  const auto g = random_graph(10, 20, 1);
  SomModel untrained;
  CHECK_THROWS_AS(constrained_full_layout(g, untrained, {}), ValidationError);
  const auto model = trained_model(random_graph(12, 20, 1), 2, 2, 1);
  CHECK_THROWS_AS(constrained_full_layout(g, model, {}), ValidationError);
}

TEST_CASE("SVG: layer order, label threshold, escaping") {
  LayoutScene scene;
  scene.frame = {0, 0, 100, 100};
  scene.items = {{"big", {20, 20}, 10, 0, 50}, {"a<b>&\"c\"", {70, 70}, 4, 1, 2}};
  scene.edges = {{0, 1, 3.0, 2.0}};
  scene.cell_regions = {{0, 0, 50, 100}, {50, 0, 50, 100}};
  const Eigen::MatrixXd raster = Eigen::MatrixXd::Random(4, 4).cwiseAbs();
  SvgOptions o;
  o.umatrix_raster = &raster;
  const auto svg = render_svg(scene, o);
  const auto background = find_or_npos(svg, "id=\"background\"");
  const auto umatrix = find_or_npos(svg, "id=\"umatrix\"");
  const auto cells = find_or_npos(svg, "id=\"cells\"");
  const auto edges = find_or_npos(svg, "id=\"edges\"");
  const auto glyphs = find_or_npos(svg, "id=\"glyphs\"");
  const auto labels = find_or_npos(svg, "id=\"labels\"");
  REQUIRE(labels != std::string::npos);
  CHECK(background < umatrix);
  CHECK(umatrix < cells);
  CHECK(cells < edges);
  CHECK(edges < glyphs);
  CHECK(glyphs < labels);
  CHECK(svg.find(">big<") == std::string::npos);
  CHECK(svg.find("a&lt;b&gt;&amp;&quot;c&quot;") != std::string::npos);
  CHECK(svg.find("stroke-width=\"2.000\"") != std::string::npos);
  CHECK(svg.rfind("</svg>\n") == svg.size() - 7);

  o.labels = false;
  CHECK(render_svg(scene, o).find("id=\"labels\"") == std::string::npos);
  scene.edges = {{0, 5, 1.0, 1.0}};
  CHECK_THROWS_AS(render_svg(scene), ValidationError);
}

TEST_CASE("DOT: quoting is lossless") {
  CHECK(dot_quote("plain") == "\"plain\"");
  CHECK(dot_quote("say \"hi\" \\ bye") == "\"say \\\"hi\\\" \\\\ bye\"");
  const std::vector<Edge> edges{{0, 1, 2.0}};
  const WeightedGraph g({"Jean \"le Bel\"", "back\\slash"}, edges);
  const auto parsed = DotReader(export_dot(g)).read();
  REQUIRE(parsed.has_value());
  CHECK(parsed->nodes.count("Jean \"le Bel\"") == 1);
  CHECK(parsed->nodes.count("back\\slash") == 1);
  REQUIRE(parsed->edges.size() == 1);
}

TEST_CASE("DOT: summary graph parses and carries weights") {
  ClusterSummaryGraph sg;
  sg.nodes = {{0, 3, 2.0}, {1, 1, 0.0}};
  sg.edges = {{0, 1, 1.5}};
  const auto plain = DotReader(export_dot(sg)).read();
  REQUIRE(plain.has_value());
  CHECK(plain->nodes.size() == 2);
  REQUIRE(plain->edges.size() == 1);

  const auto scene = force_directed_layout(sg, {});
  const auto text = export_dot(sg, &scene);
  const auto placed = DotReader(text).read();
  REQUIRE(placed.has_value());
  CHECK(placed->nodes.at("0").count("pos") == 1);
  CHECK(placed->nodes.at("0").at("vertex_count") == "3");
  CHECK(text.find("weight=\"1.5\"") != std::string::npos);
  CHECK(text.find("penwidth=\"6.000\"") != std::string::npos);
}

TEST_CASE("DOT: whole graph output parses") {
  const auto g = random_graph(30, 60, 2);
  const auto parsed = DotReader(export_dot(g)).read();
  REQUIRE(parsed.has_value());
  CHECK(parsed->nodes.size() == 30);
  CHECK(parsed->edges.size() == 60);
}
