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

#include "graphsom/graphsom.h"

#include <cstdio>
#include <cstring>
#include <mutex>
#include <new>
#include <sstream>
#include <string>

#include "graphsom/clustering.hpp"
#include "graphsom/error.hpp"
#include "graphsom/graph.hpp"
#include "graphsom/pipeline.hpp"

struct gs_graph {
  graphsom::WeightedGraph graph;
};

struct gs_partition {
  graphsom::Partition partition;
};

namespace {

thread_local std::string last_error;

std::mutex warning_mutex;
gs_warning_fn warning_fn = nullptr;
void* warning_user = nullptr;

void emit_warning(const std::string& message) {
  std::lock_guard lock(warning_mutex);
  if (warning_fn != nullptr) {
    warning_fn(message.c_str(), warning_user);
  } else {
    std::fprintf(stderr, "warning: %s\n", message.c_str());
  }
}

graphsom::LoadOptions load_options() {
  graphsom::LoadOptions opts;
  opts.on_warning = emit_warning;
  return opts;
}

gs_status fail(gs_status status, const char* message) {
  last_error = message;
  return status;
}

// Runs fn, translating exceptions into status codes.
template <class Fn>
gs_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return GS_OK;
  } catch (const graphsom::ValidationError& e) {
    return fail(GS_ERR_VALIDATION, e.what());
  } catch (const graphsom::ParseError& e) {
    return fail(GS_ERR_PARSE, e.what());
  } catch (const graphsom::NumericalError& e) {
    return fail(GS_ERR_NUMERICAL, e.what());
  } catch (const graphsom::OutputError& e) {
    return fail(GS_ERR_OUTPUT, e.what());
  } catch (const graphsom::IoError& e) {
    // unreadable input counts as an input error
    return fail(GS_ERR_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(GS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(GS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(GS_ERR_INTERNAL, "unknown error");
  }
}

#define GS_REQUIRE(cond, what)                        \
  do {                                                \
    if (!(cond)) return fail(GS_ERR_VALIDATION, what); \
  } while (0)

}  // namespace

extern "C" {

const char* gs_version(void) { return "0.1.0"; }

const char* gs_last_error_message(void) { return last_error.c_str(); }

void gs_set_warning_callback(gs_warning_fn fn, void* user_data) {
  std::lock_guard lock(warning_mutex);
  warning_fn = fn;
  warning_user = user_data;
}

gs_status gs_graph_load_file(const char* path, gs_graph** out) {
  GS_REQUIRE(path != nullptr && out != nullptr, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new gs_graph{graphsom::load_edge_list(path, load_options())}; });
}

gs_status gs_graph_load_text(const char* text, size_t length, gs_graph** out) {
  GS_REQUIRE((text != nullptr || length == 0) && out != nullptr, "null argument");
  *out = nullptr;
  return guarded([&] {
    std::istringstream in(std::string(text == nullptr ? "" : text, length));
    *out = new gs_graph{graphsom::load_edge_list(in, load_options())};
  });
}

void gs_graph_free(gs_graph* graph) { delete graph; }

size_t gs_graph_vertex_count(const gs_graph* graph) {
  return graph == nullptr ? 0 : graph->graph.vertex_count();
}

size_t gs_graph_edge_count(const gs_graph* graph) {
  return graph == nullptr ? 0 : graph->graph.edge_count();
}

gs_status gs_graph_label(const gs_graph* graph, size_t vertex, const char** out) {
  GS_REQUIRE(graph != nullptr && out != nullptr, "null argument");
  GS_REQUIRE(vertex < graph->graph.vertex_count(), "vertex out of range");
  *out = graph->graph.label(vertex).c_str();
  last_error.clear();
  return GS_OK;
}

gs_status gs_graph_degree(const gs_graph* graph, size_t vertex, double* out) {
  GS_REQUIRE(graph != nullptr && out != nullptr, "null argument");
  return guarded([&] { *out = graphsom::degree(graph->graph, vertex); });
}

gs_status gs_partition_create(const size_t* assignment, size_t n, gs_partition** out) {
  GS_REQUIRE((assignment != nullptr || n == 0) && out != nullptr, "null argument");
  *out = nullptr;
  return guarded([&] {
    std::vector<graphsom::Index> ids(assignment, assignment + n);
    *out = new gs_partition{graphsom::Partition(std::move(ids))};
  });
}

gs_status gs_connected_components(const gs_graph* graph, gs_partition** out) {
  GS_REQUIRE(graph != nullptr && out != nullptr, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new gs_partition{graphsom::connected_components(graph->graph)}; });
}

void gs_partition_free(gs_partition* partition) { delete partition; }

size_t gs_partition_size(const gs_partition* partition) {
  return partition == nullptr ? 0 : partition->partition.size();
}

size_t gs_partition_cluster_count(const gs_partition* partition) {
  return partition == nullptr ? 0 : partition->partition.cluster_count();
}

gs_status gs_partition_cluster_of(const gs_partition* partition, size_t vertex, size_t* out) {
  GS_REQUIRE(partition != nullptr && out != nullptr, "null argument");
  GS_REQUIRE(vertex < partition->partition.size(), "vertex out of range");
  *out = partition->partition.cluster_of(vertex);
  last_error.clear();
  return GS_OK;
}

gs_status gs_q_modularity(const gs_graph* graph, const gs_partition* partition, int unweighted,
                          double* out) {
  GS_REQUIRE(graph != nullptr && partition != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    *out = graphsom::q_modularity(graph->graph, partition->partition,
                                  unweighted != 0 ? graphsom::EdgeWeighting::unweighted
                                                  : graphsom::EdgeWeighting::weighted);
  });
}

gs_status gs_partition_stats_compute(const gs_graph* graph, const gs_partition* partition,
                                     gs_partition_stats* out) {
  GS_REQUIRE(graph != nullptr && partition != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    const auto s = graphsom::partition_stats(graph->graph, partition->partition);
    gs_partition_stats r{};
    r.has_q_modularity = s.q_modularity.has_value() ? 1 : 0;
    r.q_modularity = s.q_modularity.value_or(0.0);
    r.q_modularity_unweighted = s.q_modularity_unweighted.value_or(0.0);
    r.num_vertices = s.num_vertices;
    r.num_clusters = s.num_clusters;
    r.num_singletons = s.num_singletons;
    r.max_size = s.max_size;
    r.median_size = s.median_size;
    r.third_quartile_size = s.third_quartile_size;
    *out = r;
  });
}

void gs_cluster_config_init(gs_cluster_config* config) {
  if (config == nullptr) return;
  std::memset(config, 0, sizeof *config);
}

gs_status gs_run_cluster(const gs_cluster_config* config) {
  GS_REQUIRE(config != nullptr, "null config");
  GS_REQUIRE(config->input != nullptr, "input path is required");
  GS_REQUIRE(config->method != nullptr, "method is required");
  GS_REQUIRE(config->out != nullptr, "output path is required");
  return guarded([&] {
    graphsom::ClusterConfig c;
    c.input = config->input;
    c.method = graphsom::parse_method(config->method);
    if (config->has_k) c.k = config->k;
    if (config->has_p) c.p = config->p;
    if (config->has_beta) c.beta = config->beta;
    if (config->grid != nullptr) c.grid = graphsom::parse_grid(config->grid);
    if (config->has_epochs) c.epochs = config->epochs;
    if (config->has_radius) c.radius = std::make_pair(config->radius_start, config->radius_end);
    if (config->has_restarts) c.restarts = config->restarts;
    c.seed = config->seed;
    c.out = config->out;
    if (config->report != nullptr) c.report = std::filesystem::path(config->report);
    graphsom::run_cluster(c, load_options());
  });
}

gs_status gs_run_attrs(const char* partition, const char* attributes, const char* out) {
  GS_REQUIRE(partition != nullptr && attributes != nullptr && out != nullptr, "null argument");
  return guarded([&] { graphsom::run_attribute_summary(partition, attributes, out); });
}

void gs_layout_config_init(gs_layout_config* config) {
  if (config == nullptr) return;
  std::memset(config, 0, sizeof *config);
}

gs_status gs_run_layout(const gs_layout_config* config) {
  GS_REQUIRE(config != nullptr, "null config");
  GS_REQUIRE(config->mode != nullptr && config->input != nullptr && config->svg != nullptr,
             "mode, input and svg are required");
  return guarded([&] {
    graphsom::LayoutConfig c;
    c.mode = graphsom::parse_layout_mode(config->mode);
    c.input = config->input;
    if (config->partition != nullptr) c.partition = std::filesystem::path(config->partition);
    if (config->model != nullptr) c.model = std::filesystem::path(config->model);
    c.svg = config->svg;
    if (config->dot != nullptr) c.dot = std::filesystem::path(config->dot);
    if (config->has_iterations) c.iterations = config->iterations;
    c.seed = config->seed;
    graphsom::run_layout(c, load_options());
  });
}

gs_status gs_run_stats(const char* input, const char* partition, char** out) {
  GS_REQUIRE(input != nullptr && partition != nullptr && out != nullptr, "null argument");
  *out = nullptr;
  return guarded([&] {
    const std::string text = graphsom::run_stats(input, partition, load_options());
    char* buffer = new char[text.size() + 1];
    std::memcpy(buffer, text.c_str(), text.size() + 1);
    *out = buffer;
  });
}

void gs_string_free(char* text) { delete[] text; }

}  // extern "C"
