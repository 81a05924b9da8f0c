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

#include "documents.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <unordered_map>

#include <fmt/format.h>

#include "graphsom/error.hpp"

namespace graphsom {

namespace detail {

double round_places(double value, int places) {
  const double scale = std::pow(10.0, places);
  return std::round(value * scale) / scale;
}

namespace {

Json optional_q(const std::optional<double>& q, bool rounded) {
  if (!q) return nullptr;
  return rounded ? round_places(*q, 4) : *q;
}

}  // namespace

Json stats_json(const PartitionStats& stats) {
  Json j;
  j["q_modularity"] = optional_q(stats.q_modularity, true);
  j["q_modularity_unweighted"] = optional_q(stats.q_modularity_unweighted, true);
  j["q_modularity_exact"] = optional_q(stats.q_modularity, false);
  j["q_modularity_unweighted_exact"] = optional_q(stats.q_modularity_unweighted, false);
  j["num_vertices"] = stats.num_vertices;
  j["num_clusters"] = stats.num_clusters;
  j["num_singletons"] = stats.num_singletons;
  j["max_size"] = stats.max_size;
  j["median_size"] = stats.median_size;
  j["third_quartile_size"] = stats.third_quartile_size;
  j["cluster_sizes"] = stats.cluster_sizes;
  return j;
}

std::string grid_text(Index rows, Index cols) { return fmt::format("{}x{}", rows, cols); }

Json config_json(const ClusterConfig& c) {
  Json j;
  j["input"] = c.input.string();
  j["method"] = std::string(method_name(c.method));
  if (c.k) j["k"] = *c.k;
  if (c.p) j["p"] = *c.p;
  if (c.beta) j["beta"] = *c.beta;
  if (c.grid) j["grid"] = grid_text(c.grid->rows, c.grid->cols);
  if (c.epochs) j["epochs"] = *c.epochs;
  if (c.radius) j["radius"] = {c.radius->first, c.radius->second};
  if (c.restarts) j["restarts"] = *c.restarts;
  j["seed"] = c.seed;
  j["out"] = c.out.string();
  j["report"] = c.report ? Json(c.report->string()) : Json(nullptr);
  return j;
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace detail

using detail::Json;

namespace {

Json model_json(const SomModel& m, const std::optional<UMatrix>& umatrix,
                const std::vector<Index>& cluster_units) {
  Json j;
  j["grid"] = {{"rows", m.grid.rows()}, {"cols", m.grid.cols()}};
  j["epochs"] = m.epochs;
  j["sigma_start"] = m.sigma_start;
  j["sigma_end"] = m.sigma_end;
  j["bmu_rule"] = m.bmu_rule == BmuRule::nearest ? "nearest" : "local-distortion";
  j["seed"] = m.seed;
  j["unit_assignment"] = m.assignment;
  j["cluster_units"] = cluster_units;
  j["energy_trace"] = m.energy_trace;
  if (umatrix) j["umatrix"] = umatrix->values;
  Json gamma = Json::array();
  for (Eigen::Index r = 0; r < m.gamma.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(m.gamma.cols()));
    for (Eigen::Index c = 0; c < m.gamma.cols(); ++c) row[static_cast<std::size_t>(c)] = m.gamma(r, c);
    gamma.push_back(std::move(row));
  }
  j["gamma"] = std::move(gamma);
  return j;
}

}  // namespace

std::string partition_document(const WeightedGraph& g, const ClusterConfig& config,
                               const ClusterOutcome& outcome) {
  const Partition& p = outcome.partition;
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "partition";
  doc["method"] = p.method_tag();
  doc["params"] = p.params();
  doc["seed"] = config.seed;
  doc["config"] = detail::config_json(config);
  doc["num_vertices"] = p.size();
  doc["num_clusters"] = p.cluster_count();
  Json assignment = Json::array();
  for (Index v = 0; v < p.size(); ++v) assignment.push_back({g.label(v), p.cluster_of(v)});
  doc["assignment"] = std::move(assignment);
  doc["stats"] = detail::stats_json(outcome.stats);
  if (outcome.model) doc["model"] = model_json(*outcome.model, outcome.umatrix, outcome.cluster_units);
  return detail::dump(doc);
}

std::string report_document(const WeightedGraph& g, const ClusterConfig& config,
                            const ClusterOutcome& outcome) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "report";
  doc["method"] = outcome.partition.method_tag();
  doc["seed"] = config.seed;
  doc["config"] = detail::config_json(config);
  doc["graph"] = {{"vertices", g.vertex_count()},
                  {"edges", g.edge_count()},
                  {"total_weight", g.total_weight()}};
  doc["energy"] = outcome.energy;
  doc["stats"] = detail::stats_json(outcome.stats);
  return detail::dump(doc);
}

namespace {

[[noreturn]] void bad_document(const std::string& why) {
  throw ParseError("invalid partition document: " + why);
}

SomModel read_model(const Json& j, Index n) {
  const Index rows = j.at("grid").at("rows").get<Index>();
  const Index cols = j.at("grid").at("cols").get<Index>();
  if (rows == 0 || cols == 0) bad_document("empty grid");
  SomModel m;
  m.grid = SomGrid(rows, cols);
  m.epochs = j.at("epochs").get<int>();
  m.sigma_start = j.at("sigma_start").get<double>();
  m.sigma_end = j.at("sigma_end").get<double>();
  const auto rule = j.at("bmu_rule").get<std::string>();
  if (rule == "nearest") {
    m.bmu_rule = BmuRule::nearest;
  } else if (rule == "local-distortion") {
    m.bmu_rule = BmuRule::local_distortion;
  } else {
    bad_document("unknown bmu_rule '" + rule + "'");
  }
  m.seed = j.at("seed").get<std::uint64_t>();
  m.assignment = j.at("unit_assignment").get<std::vector<Index>>();
  m.energy_trace = j.at("energy_trace").get<std::vector<double>>();
  const auto& gamma = j.at("gamma");
  if (gamma.size() != m.grid.unit_count()) bad_document("gamma row count differs from the grid");
  m.gamma.resize(static_cast<Eigen::Index>(m.grid.unit_count()), static_cast<Eigen::Index>(n));
  for (Index r = 0; r < gamma.size(); ++r) {
    const auto row = gamma[r].get<std::vector<double>>();
    if (row.size() != n) bad_document("gamma column count differs from the vertex count");
    for (Index c = 0; c < n; ++c) {
      m.gamma(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
    }
  }
  if (m.assignment.size() != n) bad_document("unit_assignment length differs from the vertex count");
  for (Index u : m.assignment) {
    if (u >= m.grid.unit_count()) bad_document(fmt::format("unit {} outside the grid", u));
  }
  return m;
}

}  // namespace

PartitionDocument read_partition_document(std::istream& in) {
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(fmt::format("partition document is not JSON: {}", e.what()));
  }
  try {
    if (!doc.is_object()) bad_document("top level is not an object");
    if (doc.at("schema_version").get<int>() != kSchemaVersion) {
      bad_document(fmt::format("unsupported schema_version {}", doc.at("schema_version").dump()));
    }
    if (doc.at("kind").get<std::string>() != "partition") bad_document("kind is not 'partition'");

    PartitionDocument out{{}, Partition(std::vector<Index>{0}), doc.at("seed").get<std::uint64_t>(), {}, {}, {}};
    std::vector<Index> assignment;
    for (const auto& pair : doc.at("assignment")) {
      if (!pair.is_array() || pair.size() != 2) bad_document("assignment entries must be pairs");
      out.labels.push_back(pair[0].get<std::string>());
      assignment.push_back(pair[1].get<Index>());
    }
    if (out.labels.empty()) bad_document("empty assignment");
    try {
      out.partition = Partition(std::move(assignment), doc.at("method").get<std::string>(),
                                doc.at("params").get<Params>());
    } catch (const ValidationError& e) {
      bad_document(e.what());
    }
    if (doc.contains("model")) {
      const auto& m = doc.at("model");
      out.model = read_model(m, out.labels.size());
      out.cluster_units = m.at("cluster_units").get<std::vector<Index>>();
      if (m.contains("umatrix")) {
        UMatrix u{out.model->grid.rows(), out.model->grid.cols(),
                  m.at("umatrix").get<std::vector<double>>()};
        if (u.values.size() != out.model->grid.unit_count()) bad_document("umatrix size differs from the grid");
        out.umatrix = std::move(u);
      }
    }
    return out;
  } catch (const Json::exception& e) {
    bad_document(e.what());
  }
}

PartitionDocument read_partition_document(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  return read_partition_document(in);
}

PartitionDocument align_to_graph(PartitionDocument doc, const WeightedGraph& g) {
  const Index n = g.vertex_count();
  if (doc.labels.size() != n) {
    throw ValidationError(fmt::format("partition covers {} vertices, graph has {}",
                                      doc.labels.size(), n));
  }
  // perm[v] = position of graph vertex v in the document
  std::vector<Index> perm(n, n);
  for (Index i = 0; i < n; ++i) {
    const auto v = g.find(doc.labels[i]);
    if (!v) throw ValidationError(fmt::format("partition vertex '{}' is not in the graph", doc.labels[i]));
    if (perm[*v] != n) throw ValidationError(fmt::format("partition lists '{}' twice", doc.labels[i]));
    perm[*v] = i;
  }
  bool identity = true;
  for (Index v = 0; v < n; ++v) identity = identity && perm[v] == v;
  if (identity) return doc;

  std::vector<Index> assignment(n);
  for (Index v = 0; v < n; ++v) assignment[v] = doc.partition.cluster_of(perm[v]);
  doc.partition = Partition(std::move(assignment), doc.partition.method_tag(), doc.partition.params());
  doc.labels = g.labels();
  if (doc.model) {
    SomModel& m = *doc.model;
    Eigen::MatrixXd gamma(m.gamma.rows(), m.gamma.cols());
    std::vector<Index> units(n);
    for (Index v = 0; v < n; ++v) {
      gamma.col(static_cast<Eigen::Index>(v)) = m.gamma.col(static_cast<Eigen::Index>(perm[v]));
      units[v] = m.assignment[perm[v]];
    }
    m.gamma = std::move(gamma);
    m.assignment = std::move(units);
  }
  return doc;
}

}  // namespace graphsom
