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

#include "graphsom/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <utility>

#include <fmt/format.h>

#include "graphsom/error.hpp"

namespace graphsom {

// ---------------------------------------------------------------------------
// SymmetricMatrix

SymmetricMatrix::SymmetricMatrix(Eigen::MatrixXd entries) : m_(std::move(entries)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols()) {
    throw ValidationError(fmt::format("symmetric matrix must be square and non-empty, got {}x{}",
                                      m_.rows(), m_.cols()));
  }
  for (Eigen::Index j = 0; j < m_.cols(); ++j) {
    for (Eigen::Index i = j + 1; i < m_.rows(); ++i) {
      if (m_(i, j) != m_(j, i) && !(std::isnan(m_(i, j)) && std::isnan(m_(j, i)))) {
        throw ValidationError(fmt::format("matrix is not symmetric at ({}, {})", i, j));
      }
    }
  }
}

SymmetricMatrix SymmetricMatrix::zero(Index n) {
  return SymmetricMatrix(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                               static_cast<Eigen::Index>(n)));
}

SymmetricMatrix SymmetricMatrix::from_lower(const Eigen::MatrixXd& entries) {
  Eigen::MatrixXd m = entries.triangularView<Eigen::Lower>();
  m.triangularView<Eigen::StrictlyUpper>() = m.transpose();
  return SymmetricMatrix(std::move(m));
}

// ---------------------------------------------------------------------------
// WeightedGraph

WeightedGraph::WeightedGraph(std::vector<std::string> labels, std::span<const Edge> edges)
    : labels_(std::move(labels)) {
  const Index n = labels_.size();
  index_.reserve(n);
  for (Index i = 0; i < n; ++i) {
    if (!index_.emplace(labels_[i], i).second) {
      throw ValidationError(fmt::format("duplicate vertex label '{}'", labels_[i]));
    }
  }

  const auto size = static_cast<Eigen::Index>(n);
  weights_ = Eigen::MatrixXd::Zero(size, size);
  for (const Edge& e : edges) {
    if (e.source >= n || e.target >= n) {
      throw ValidationError(fmt::format("edge ({}, {}) references a vertex outside 0..{}",
                                        e.source, e.target, n));
    }
    if (e.source == e.target) {
      throw ValidationError(fmt::format("self-loop on vertex '{}'", labels_[e.source]));
    }
    if (!std::isfinite(e.weight) || e.weight < 0.0) {
      throw ValidationError(fmt::format("invalid weight {} on edge ({}, {})", e.weight,
                                        labels_[e.source], labels_[e.target]));
    }
    weights_(e.source, e.target) += e.weight;
    weights_(e.target, e.source) = weights_(e.source, e.target);
  }

  adjacency_.resize(n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const double w = weights_(i, j);
      if (w > 0.0) {
        adjacency_[j].push_back({i, w});
        if (i < j) {
          ++edge_count_;
          total_weight_ += w;
        }
      }
    }
  }
}

std::optional<Index> WeightedGraph::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// Edge-list ingestion

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

double parse_weight(std::string_view text, std::size_t line_no) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw ParseError(fmt::format("weight '{}' is not a number", text), line_no);
  }
  if (!std::isfinite(value)) {
    throw ParseError(fmt::format("weight '{}' is not finite", text), line_no);
  }
  if (value < 0.0) {
    throw ParseError(fmt::format("negative weight {}", text), line_no);
  }
  if (value == 0.0) {
    throw ParseError("weight must be positive", line_no);
  }
  return value;
}

}  // namespace

WeightedGraph load_edge_list(std::istream& in, const LoadOptions& options) {
  std::vector<std::string> labels;
  std::unordered_map<std::string, Index> index;
  std::vector<Edge> edges;

  auto intern = [&](std::string_view label) {
    auto [it, inserted] = index.emplace(std::string(label), labels.size());
    if (inserted) labels.emplace_back(label);
    return it->second;
  };

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    const auto fields = split_tabs(line);
    if (fields.size() < 2 || fields.size() > 3) {
      throw ParseError(fmt::format("expected 2 or 3 tab-separated fields, found {}",
                                   fields.size()),
                       line_no);
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw ParseError("empty vertex label", line_no);
    }
    const double w = fields.size() == 3 ? parse_weight(fields[2], line_no) : 1.0;
    const Index a = intern(fields[0]);
    const Index b = intern(fields[1]);
    if (a == b) {
      if (options.on_self_loop == SelfLoopPolicy::error) {
        throw ParseError(fmt::format("self-loop on '{}'", fields[0]), line_no);
      }
      if (options.on_warning) {
        options.on_warning(fmt::format("line {}: dropped self-loop on '{}'", line_no, fields[0]));
      }
      continue;
    }
    edges.push_back({a, b, w});
  }
  if (in.bad()) throw IoError("read failure while loading edge list");
  if (labels.empty()) throw ParseError("edge list is empty");
  return WeightedGraph(std::move(labels), edges);
}

WeightedGraph load_edge_list(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  return load_edge_list(in, options);
}

// ---------------------------------------------------------------------------
// Degrees and Laplacian

double degree(const WeightedGraph& g, Index i) {
  if (i >= g.vertex_count()) {
    throw ValidationError(fmt::format("vertex index {} out of range (n = {})", i,
                                      g.vertex_count()));
  }
  double d = 0.0;
  const auto& w = g.weights();
  for (Eigen::Index j = 0; j < w.rows(); ++j) d += w(j, static_cast<Eigen::Index>(i));
  return d;
}

SymmetricMatrix laplacian(const WeightedGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  Eigen::MatrixXd l = -g.weights();
  for (Eigen::Index i = 0; i < n; ++i) {
    l(i, i) = degree(g, static_cast<Index>(i));
  }
  return SymmetricMatrix(std::move(l));
}

// ---------------------------------------------------------------------------
// Partition

Partition::Partition(std::vector<Index> assignment, std::string method_tag, Params params)
    : assignment_(std::move(assignment)),
      method_tag_(std::move(method_tag)),
      params_(std::move(params)) {
  if (assignment_.empty()) throw ValidationError("partition must cover at least one vertex");
  const Index max_id = *std::max_element(assignment_.begin(), assignment_.end());
  std::vector<bool> seen(max_id + 1, false);
  for (Index c : assignment_) seen[c] = true;
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw ValidationError("partition cluster ids are not contiguous");
  }
  k_ = max_id + 1;
}

Partition Partition::compact(std::span<const Index> raw, std::string method_tag,
                             Params params) {
  if (raw.empty()) throw ValidationError("partition must cover at least one vertex");
  const Index max_id = *std::max_element(raw.begin(), raw.end());
  std::vector<Index> remap(max_id + 1, 0);
  std::vector<bool> used(max_id + 1, false);
  for (Index c : raw) used[c] = true;
  Index next = 0;
  for (Index c = 0; c <= max_id; ++c) {
    if (used[c]) remap[c] = next++;
  }
  std::vector<Index> assignment(raw.size());
  std::transform(raw.begin(), raw.end(), assignment.begin(), [&](Index c) { return remap[c]; });
  return Partition(std::move(assignment), std::move(method_tag), std::move(params));
}

std::vector<Index> Partition::cluster_sizes() const {
  std::vector<Index> sizes(k_, 0);
  for (Index c : assignment_) ++sizes[c];
  return sizes;
}

std::vector<std::vector<Index>> Partition::members() const {
  std::vector<std::vector<Index>> out(k_);
  for (Index v = 0; v < assignment_.size(); ++v) out[assignment_[v]].push_back(v);
  return out;
}

void Partition::set_provenance(std::string method_tag, Params params) {
  method_tag_ = std::move(method_tag);
  params_ = std::move(params);
}

bool Partition::same_clusters_as(const Partition& other) const {
  if (size() != other.size() || k_ != other.k_) return false;
  std::vector<Index> forward(k_, k_);
  std::vector<Index> backward(k_, k_);
  for (Index v = 0; v < size(); ++v) {
    const Index a = assignment_[v];
    const Index b = other.assignment_[v];
    if (forward[a] == k_ && backward[b] == k_) {
      forward[a] = b;
      backward[b] = a;
    } else if (forward[a] != b || backward[b] != a) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Components and summary graph

Partition connected_components(const WeightedGraph& g) {
  const Index n = g.vertex_count();
  constexpr Index kUnset = static_cast<Index>(-1);
  std::vector<Index> component(n, kUnset);
  std::vector<Index> stack;
  Index next = 0;
  for (Index root = 0; root < n; ++root) {
    if (component[root] != kUnset) continue;
    component[root] = next;
    stack.push_back(root);
    while (!stack.empty()) {
      const Index v = stack.back();
      stack.pop_back();
      for (const auto& nb : g.neighbors(v)) {
        if (component[nb.vertex] == kUnset) {
          component[nb.vertex] = next;
          stack.push_back(nb.vertex);
        }
      }
    }
    ++next;
  }
  return Partition(std::move(component), "components");
}

ClusterSummaryGraph summary_graph(const WeightedGraph& g, const Partition& p) {
  if (p.size() != g.vertex_count()) {
    throw ValidationError(fmt::format("partition covers {} vertices, graph has {}", p.size(),
                                      g.vertex_count()));
  }
  const Index k = p.cluster_count();
  ClusterSummaryGraph sg;
  sg.nodes.resize(k);
  const auto sizes = p.cluster_sizes();
  for (Index c = 0; c < k; ++c) sg.nodes[c] = {c, sizes[c], 0.0};

  Eigen::MatrixXd between = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k),
                                                  static_cast<Eigen::Index>(k));
  for (Index j = 0; j < g.vertex_count(); ++j) {
    for (const auto& nb : g.neighbors(j)) {
      const Index i = nb.vertex;
      if (i >= j) continue;
      const Index a = p.cluster_of(i);
      const Index b = p.cluster_of(j);
      if (a == b) {
        sg.nodes[a].intra_weight += nb.weight;
      } else {
        between(std::min(a, b), std::max(a, b)) += nb.weight;
      }
    }
  }
  for (Index a = 0; a < k; ++a) {
    for (Index b = a + 1; b < k; ++b) {
      const double w = between(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (w > 0.0) sg.edges.push_back({a, b, w});
    }
  }
  return sg;
}

}  // namespace graphsom
