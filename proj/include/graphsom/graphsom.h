/*
 * Copyright 2026 The graphsom Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface of libgraphsom.
 *
 * Every fallible call returns a gs_status. On failure the message is kept
 * per thread and read with gs_last_error_message(). Handles are opaque and
 * released with their _free function; passing NULL to a _free is allowed.
 */

#ifndef GRAPHSOM_GRAPHSOM_H_
#define GRAPHSOM_GRAPHSOM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GRAPHSOM_BUILDING_LIBRARY)
#    define GS_API __declspec(dllexport)
#  else
#    define GS_API __declspec(dllimport)
#  endif
#else
#  define GS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as process exit codes of the command-line tool. */
typedef enum gs_status {
  GS_OK = 0,
  GS_ERR_INTERNAL = 1,
  GS_ERR_VALIDATION = 2, /* bad arguments, missing or inapplicable parameters */
  GS_ERR_PARSE = 3,      /* malformed or unreadable input */
  GS_ERR_NUMERICAL = 4,
  GS_ERR_OUTPUT = 5      /* a requested output could not be written */
} gs_status;

typedef struct gs_graph gs_graph;
typedef struct gs_partition gs_partition;

GS_API const char* gs_version(void);

/* Message of the last failed call on this thread; "" if none. */
GS_API const char* gs_last_error_message(void);

/* Receives loader warnings (dropped self-loops). NULL restores the default,
 * which prints them to stderr. */
typedef void (*gs_warning_fn)(const char* message, void* user_data);
GS_API void gs_set_warning_callback(gs_warning_fn fn, void* user_data);

/* ---- graphs ---- */

GS_API gs_status gs_graph_load_file(const char* path, gs_graph** out);
GS_API gs_status gs_graph_load_text(const char* text, size_t length, gs_graph** out);
GS_API void gs_graph_free(gs_graph* graph);

GS_API size_t gs_graph_vertex_count(const gs_graph* graph);
GS_API size_t gs_graph_edge_count(const gs_graph* graph);
/* The label stays valid until the graph is freed. */
GS_API gs_status gs_graph_label(const gs_graph* graph, size_t vertex, const char** out);
GS_API gs_status gs_graph_degree(const gs_graph* graph, size_t vertex, double* out);

/* ---- partitions ---- */

/* cluster ids must be exactly {0..k-1} */
GS_API gs_status gs_partition_create(const size_t* assignment, size_t n, gs_partition** out);
GS_API gs_status gs_connected_components(const gs_graph* graph, gs_partition** out);
GS_API void gs_partition_free(gs_partition* partition);

GS_API size_t gs_partition_size(const gs_partition* partition);
GS_API size_t gs_partition_cluster_count(const gs_partition* partition);
GS_API gs_status gs_partition_cluster_of(const gs_partition* partition, size_t vertex,
                                         size_t* out);

/* unweighted != 0 counts every edge once regardless of its weight. */
GS_API gs_status gs_q_modularity(const gs_graph* graph, const gs_partition* partition,
                                 int unweighted, double* out);

typedef struct gs_partition_stats {
  int has_q_modularity; /* 0 for graphs without edges */
  double q_modularity;
  double q_modularity_unweighted;
  size_t num_vertices;
  size_t num_clusters;
  size_t num_singletons;
  size_t max_size;
  double median_size;
  double third_quartile_size;
} gs_partition_stats;

GS_API gs_status gs_partition_stats_compute(const gs_graph* graph, const gs_partition* partition,
                                            gs_partition_stats* out);

/* ---- pipeline runs ---- */

/* Fields left at their gs_cluster_config_init values take the method
 * defaults. Strings are borrowed for the duration of the call. */
typedef struct gs_cluster_config {
  const char* input;
  const char* method; /* spectral | kernel-kmeans | spectral-som | kernel-som */
  int has_k;
  size_t k;
  int has_p;
  size_t p;
  int has_beta;
  double beta;
  const char* grid; /* "RxC" or NULL */
  int has_epochs;
  int epochs;
  int has_radius;
  double radius_start;
  double radius_end;
  int has_restarts;
  int restarts;
  uint64_t seed;
  const char* out;
  const char* report; /* NULL for none */
} gs_cluster_config;

GS_API void gs_cluster_config_init(gs_cluster_config* config);
GS_API gs_status gs_run_cluster(const gs_cluster_config* config);

GS_API gs_status gs_run_attrs(const char* partition, const char* attributes, const char* out);

typedef struct gs_layout_config {
  const char* mode; /* summary | map | full */
  const char* input;
  const char* partition; /* exactly one of partition and model */
  const char* model;
  const char* svg;
  const char* dot; /* NULL for none */
  int has_iterations;
  int iterations;
  uint64_t seed;
} gs_layout_config;

GS_API void gs_layout_config_init(gs_layout_config* config);
GS_API gs_status gs_run_layout(const gs_layout_config* config);

/* *out receives a statistics document; release it with gs_string_free. */
GS_API gs_status gs_run_stats(const char* input, const char* partition, char** out);
GS_API void gs_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* GRAPHSOM_GRAPHSOM_H_ */
