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

#include "graphsom/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "documents.hpp"
#include "graphsom/error.hpp"
#include "graphsom/linalg.hpp"

namespace graphsom {

std::string_view method_name(Method method) {
  switch (method) {
    case Method::spectral: return "spectral";
    case Method::kernel_kmeans: return "kernel-kmeans";
    case Method::spectral_som: return "spectral-som";
    case Method::kernel_som: return "kernel-som";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::spectral, Method::kernel_kmeans, Method::spectral_som, Method::kernel_som}) {
    if (method_name(m) == name) return m;
  }
  throw ValidationError(fmt::format("unknown method '{}'", name));
}

bool is_som_method(Method method) {
  return method == Method::spectral_som || method == Method::kernel_som;
}

bool is_kernel_method(Method method) {
  return method == Method::kernel_kmeans || method == Method::kernel_som;
}

GridShape parse_grid(std::string_view text) {
  const auto x = text.find_first_of("xX");
  auto number = [&](std::string_view part) -> Index {
    Index value = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size() || value == 0) {
      throw ValidationError(fmt::format("grid '{}' is not RxC with positive R and C", text));
    }
    return value;
  };
  if (x == std::string_view::npos) number({});
  return {number(text.substr(0, x)), number(text.substr(x + 1))};
}

ClusterConfig resolve_cluster_config(const ClusterConfig& config, Index n) {
  ClusterConfig c = config;
  const std::string_view name = method_name(c.method);
  auto reject = [&](bool given, const char* flag) {
    if (given) throw ValidationError(fmt::format("{} does not apply to method {}", flag, name));
  };

  if (is_som_method(c.method)) {
    reject(c.k.has_value(), "--k");
    if (!c.grid) throw ValidationError(fmt::format("method {} requires --grid RxC", name));
    if (c.grid->rows == 0 || c.grid->cols == 0) throw ValidationError("grid sides must be positive");
    if (!c.epochs) c.epochs = kDefaultEpochs;
    if (*c.epochs < 1) throw ValidationError("--epochs must be at least 1");
    if (!c.radius) {
      const double end = 0.5;
      c.radius = {std::max(0.5 * static_cast<double>(std::max(c.grid->rows, c.grid->cols)), end), end};
    }
    const auto [s, e] = *c.radius;
    if (!(std::isfinite(s) && e > 0.0 && s >= e)) {
      throw ValidationError(fmt::format("--radius needs start >= end > 0, got {},{}", s, e));
    }
  } else {
    reject(c.grid.has_value(), "--grid");
    reject(c.epochs.has_value(), "--epochs");
    reject(c.radius.has_value(), "--radius");
    if (!c.k) c.k = kDefaultClusters;
    if (*c.k < 1 || *c.k > n) {
      throw ValidationError(fmt::format("--k = {} must lie in 1..{}", *c.k, n));
    }
  }
  if (!c.restarts) c.restarts = kDefaultRestarts;
  if (*c.restarts < 1) throw ValidationError("--restarts must be at least 1");

  if (is_kernel_method(c.method)) {
    reject(c.p.has_value(), "--p");
    if (!c.beta) c.beta = kDefaultBeta;
    if (!std::isfinite(*c.beta) || *c.beta < 0.0) {
      throw ValidationError(fmt::format("--beta must be finite and nonnegative, got {}", *c.beta));
    }
  } else {
    reject(c.beta.has_value(), "--beta");
    if (!c.p) c.p = c.k.value_or(kDefaultClusters);
    if (*c.p < 1 || *c.p > n) {
      throw ValidationError(fmt::format("--p = {} must lie in 1..{}", *c.p, n));
    }
  }
  return c;
}

namespace {

Params method_params(const ClusterConfig& c) {
  Params p;
  if (c.k) p["k"] = fmt::format("{}", *c.k);
  if (c.p) p["p"] = fmt::format("{}", *c.p);
  if (c.beta) p["beta"] = fmt::format("{}", *c.beta);
  if (c.grid) p["grid"] = detail::grid_text(c.grid->rows, c.grid->cols);
  if (c.epochs) p["epochs"] = fmt::format("{}", *c.epochs);
  if (c.radius) p["radius"] = fmt::format("{},{}", c.radius->first, c.radius->second);
  if (c.restarts) p["restarts"] = fmt::format("{}", *c.restarts);
  return p;
}

}  // namespace

ClusterOutcome cluster_graph(const WeightedGraph& g, const ClusterConfig& c) {
  const Params params = method_params(c);
  const std::string tag(method_name(c.method));

  if (!is_som_method(c.method)) {
    KMeansOptions opts{*c.k, c.seed, *c.restarts, 300};
    KMeansResult r = c.method == Method::spectral
                         ? spectral_clustering(g, *c.p, opts)
                         : kernel_kmeans(heat_kernel(laplacian(g), *c.beta), opts);
    r.partition.set_provenance(tag, params);
    ClusterOutcome out{r.partition, partition_stats(g, r.partition), r.within_energy, {}, {}, {}};
    return out;
  }

  const SomGrid grid(c.grid->rows, c.grid->cols);
  SomOptions opts;
  opts.epochs = *c.epochs;
  opts.sigma_start = c.radius->first;
  opts.sigma_end = c.radius->second;
  opts.seed = c.seed;
  opts.restarts = *c.restarts;

  SomModel model;
  UMatrix umatrix;
  if (c.method == Method::kernel_som) {
    const KernelMatrix k = heat_kernel(laplacian(g), *c.beta);
    model = batch_kernel_som(k, grid, opts);
    umatrix = u_matrix(model, k);
  } else {
    const Eigen::MatrixXd points = spectral_embedding(laplacian(g), *c.p);
    model = batch_som(points, grid, opts);
    umatrix = u_matrix(model, points);
  }
  SomPartition sp = som_partition(model, tag, params);
  ClusterOutcome out{sp.partition, partition_stats(g, sp.partition), model.energy_trace.back(),
                     std::move(model), std::move(umatrix), std::move(sp.cluster_units)};
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError(fmt::format("cannot open '{}' for writing", path.string()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw OutputError(fmt::format("write to '{}' failed", path.string()));
}

void run_cluster(const ClusterConfig& config, const LoadOptions& load) {
  const WeightedGraph g = load_edge_list(config.input, load);
  const ClusterConfig resolved = resolve_cluster_config(config, g.vertex_count());
  const ClusterOutcome outcome = cluster_graph(g, resolved);
  write_text_file(resolved.out, partition_document(g, resolved, outcome));
  if (resolved.report) write_text_file(*resolved.report, report_document(g, resolved, outcome));
}

// ---------------------------------------------------------------------------

LayoutMode parse_layout_mode(std::string_view name) {
  if (name == "summary") return LayoutMode::summary;
  if (name == "map") return LayoutMode::map;
  if (name == "full") return LayoutMode::full;
  throw ValidationError(fmt::format("unknown layout mode '{}'", name));
}

namespace {

// Small clusters are labeled with their members' names.
void name_small_clusters(LayoutScene& scene, const std::vector<std::string>& labels,
                         const Partition& partition, Index threshold) {
  const auto members = partition.members();
  for (auto& item : scene.items) {
    if (item.cluster >= members.size() || members[item.cluster].size() > threshold) continue;
    std::string text;
    for (Index v : members[item.cluster]) {
      if (!text.empty()) text += ", ";
      text += labels[v];
    }
    item.label = std::move(text);
  }
}

}  // namespace

LayoutArtifacts build_layout(const WeightedGraph& g, const PartitionDocument& doc,
                             const LayoutConfig& config) {
  const SvgOptions svg_options;
  LayoutArtifacts out;
  switch (config.mode) {
    case LayoutMode::summary: {
      const ClusterSummaryGraph sg = summary_graph(g, doc.partition);
      ForceLayoutOptions opts;
      opts.iterations = config.iterations.value_or(kSummaryIterations);
      opts.frame = config.frame;
      opts.seed = config.seed;
      out.scene = force_directed_layout(sg, opts);
      name_small_clusters(out.scene, doc.labels, doc.partition, svg_options.label_threshold);
      out.svg = render_svg(out.scene, svg_options);
      out.dot = export_dot(sg, &out.scene);
      break;
    }
    case LayoutMode::map: {
      if (!doc.model) throw ValidationError("map mode needs a document with a trained map");
      if (config.iterations) throw ValidationError("--iterations does not apply to map mode");
      const SomPartition sp = som_partition(*doc.model);
      const ClusterSummaryGraph sg = summary_graph(g, sp.partition);
      out.scene = som_map_scene(*doc.model, sg, config.frame);
      name_small_clusters(out.scene, doc.labels, sp.partition, svg_options.label_threshold);
      SvgOptions opts = svg_options;
      Eigen::MatrixXd raster;
      if (doc.umatrix) {
        raster = doc.umatrix->upsample(kUMatrixUpsample);
        opts.umatrix_raster = &raster;
      }
      out.svg = render_svg(out.scene, opts);
      out.dot = export_dot(sg, &out.scene);
      break;
    }
    case LayoutMode::full: {
      if (!doc.model) throw ValidationError("full mode needs a document with a trained map");
      ConstrainedLayoutOptions opts;
      opts.iterations = config.iterations.value_or(kFullIterations);
      opts.frame = config.frame;
      opts.seed = config.seed;
      out.scene = constrained_full_layout(g, *doc.model, opts);
      out.svg = render_svg(out.scene, svg_options);
      out.dot = export_dot(g, &out.scene);
      break;
    }
  }
  return out;
}

void run_layout(const LayoutConfig& config, const LoadOptions& load) {
  if (config.partition && config.model) {
    throw ValidationError("give either --partition or --model, not both");
  }
  if (!config.partition && !config.model) throw ValidationError("--partition or --model is required");
  if (config.mode != LayoutMode::summary && !config.model) {
    throw ValidationError("map and full modes need --model");
  }
  if (config.iterations && *config.iterations < 1) {
    throw ValidationError("--iterations must be at least 1");
  }
  const WeightedGraph g = load_edge_list(config.input, load);
  PartitionDocument doc = read_partition_document(config.model ? *config.model : *config.partition);
  if (config.model && !doc.model) {
    throw ValidationError("--model document holds no trained map; it was not written by a SOM method");
  }
  doc = align_to_graph(std::move(doc), g);
  const LayoutArtifacts art = build_layout(g, doc, config);
  write_text_file(config.svg, art.svg);
  if (config.dot) write_text_file(*config.dot, art.dot);
}

std::string run_stats(const std::filesystem::path& input, const std::filesystem::path& partition,
                      const LoadOptions& load) {
  const WeightedGraph g = load_edge_list(input, load);
  const PartitionDocument doc = align_to_graph(read_partition_document(partition), g);
  detail::Json out;
  out["schema_version"] = kSchemaVersion;
  out["kind"] = "stats";
  out["input"] = input.string();
  out["partition"] = partition.string();
  out["method"] = doc.partition.method_tag();
  out["params"] = doc.partition.params();
  out["seed"] = doc.seed;
  out["stats"] = detail::stats_json(partition_stats(g, doc.partition));
  return detail::dump(out);
}

}  // namespace graphsom
