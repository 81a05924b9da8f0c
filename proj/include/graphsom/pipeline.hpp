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

// End-to-end runs behind the command-line tool: clustering with report
// documents, per-cluster attribute summaries, drawings and statistics.
//
// Documents are JSON with a "schema_version" field. A partition document
// written by a SOM method also carries the trained map, so layouts can be
// redrawn without retraining.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "graphsom/clustering.hpp"
#include "graphsom/graph.hpp"
#include "graphsom/layout.hpp"
#include "graphsom/som.hpp"

namespace graphsom {

inline constexpr int kSchemaVersion = 1;

enum class Method { spectral, kernel_kmeans, spectral_som, kernel_som };

std::string_view method_name(Method method);
// Throws ValidationError for anything but the four method names.
Method parse_method(std::string_view name);
bool is_som_method(Method method);
bool is_kernel_method(Method method);

struct GridShape {
  Index rows = 0;
  Index cols = 0;
};

// "RxC", e.g. "7x7". Throws ValidationError.
GridShape parse_grid(std::string_view text);

inline constexpr Index kDefaultClusters = 50;
inline constexpr int kDefaultRestarts = 10;
inline constexpr int kDefaultEpochs = 100;

struct ClusterConfig {
  std::filesystem::path input;
  Method method = Method::spectral;
  std::optional<Index> k;
  std::optional<Index> p;
  std::optional<double> beta;
  std::optional<GridShape> grid;
  std::optional<int> epochs;
  std::optional<std::pair<double, double>> radius;
  std::optional<int> restarts;
  std::uint64_t seed = 0;
  std::filesystem::path out;
  std::optional<std::filesystem::path> report;
};

// Fills method defaults and checks that every given parameter applies to
// the method and is in range. n is the vertex count of the input graph.
// Throws ValidationError.
ClusterConfig resolve_cluster_config(const ClusterConfig& config, Index n);

struct ClusterOutcome {
  Partition partition;
  PartitionStats stats;
  // Lloyd energy for the k-means methods, final map energy for SOMs.
  double energy = 0.0;
  std::optional<SomModel> model;
  std::optional<UMatrix> umatrix;
  std::vector<Index> cluster_units;
};

// Runs the configured method on g. `config` must be resolved.
ClusterOutcome cluster_graph(const WeightedGraph& g, const ClusterConfig& config);

std::string partition_document(const WeightedGraph& g, const ClusterConfig& config,
                               const ClusterOutcome& outcome);
std::string report_document(const WeightedGraph& g, const ClusterConfig& config,
                            const ClusterOutcome& outcome);

// Load, resolve, cluster, write the partition document and the optional
// report.
void run_cluster(const ClusterConfig& config, const LoadOptions& load = {});

// A partition document read back.
struct PartitionDocument {
  std::vector<std::string> labels;  // vertex order of the clustered graph
  Partition partition;
  std::uint64_t seed = 0;
  std::optional<SomModel> model;
  std::optional<UMatrix> umatrix;
  std::vector<Index> cluster_units;
};

// Throws ParseError for malformed documents.
PartitionDocument read_partition_document(std::istream& in);
PartitionDocument read_partition_document(const std::filesystem::path& path);

// Rearranges doc so that its vertex order is that of g. Throws
// ValidationError unless both hold exactly the same labels.
PartitionDocument align_to_graph(PartitionDocument doc, const WeightedGraph& g);

// ---------------------------------------------------------------------------
// Attributes

enum class AttributeKind { numeric, categorical };

// Lines "vertex<TAB>key<TAB>value". A line "@schema<TAB>key=numeric<TAB>
// key=categorical..." declares key kinds; undeclared keys are categorical.
// '#' lines and blank lines are skipped.
class AttributeTable {
 public:
  struct Record {
    std::string vertex;
    std::string key;
    std::string value;
    double number = 0.0;  // numeric keys only
  };

  static AttributeTable parse(std::istream& in);
  static AttributeTable load(const std::filesystem::path& path);

  // Keys in order of declaration, then first use.
  const std::vector<std::pair<std::string, AttributeKind>>& keys() const { return keys_; }
  const std::vector<Record>& records() const { return records_; }

 private:
  std::vector<std::pair<std::string, AttributeKind>> keys_;
  std::vector<Record> records_;
};

struct NumericSummary {
  Index present = 0;
  Index missing = 0;
  std::optional<double> mean;
  std::optional<double> stddev;  // population form
};

struct CategoricalSummary {
  Index present = 0;
  Index missing = 0;
  // Descending count, ties by value.
  std::vector<std::pair<std::string, Index>> counts;
};

struct ClusterAttributeSummary {
  Index cluster = 0;
  Index size = 0;
  std::vector<std::pair<std::string, NumericSummary>> numeric;
  std::vector<std::pair<std::string, CategoricalSummary>> categorical;
};

// labels[i] names vertex i of the partition. Throws ValidationError naming
// the first attribute vertex that is not a label, or when the table is
// empty.
std::vector<ClusterAttributeSummary> summarize_attributes(const std::vector<std::string>& labels,
                                                          const Partition& partition,
                                                          const AttributeTable& table);

std::string attribute_summary_document(const std::vector<ClusterAttributeSummary>& summary,
                                       const AttributeTable& table);

void run_attribute_summary(const std::filesystem::path& partition,
                           const std::filesystem::path& attributes,
                           const std::filesystem::path& out);

// ---------------------------------------------------------------------------
// Drawing and statistics

enum class LayoutMode { summary, map, full };

// Throws ValidationError.
LayoutMode parse_layout_mode(std::string_view name);

inline constexpr int kSummaryIterations = 500;
inline constexpr int kFullIterations = 1000;
inline constexpr int kUMatrixUpsample = 8;

struct LayoutConfig {
  LayoutMode mode = LayoutMode::summary;
  std::filesystem::path input;
  std::optional<std::filesystem::path> partition;
  std::optional<std::filesystem::path> model;
  std::filesystem::path svg;
  std::optional<std::filesystem::path> dot;
  std::optional<int> iterations;
  std::uint64_t seed = 0;
  Rect frame{0.0, 0.0, 1000.0, 1000.0};
};

struct LayoutArtifacts {
  LayoutScene scene;
  std::string svg;
  std::string dot;
};

// Pure part of run_layout. Map and full modes need doc.model.
LayoutArtifacts build_layout(const WeightedGraph& g, const PartitionDocument& doc,
                             const LayoutConfig& config);

void run_layout(const LayoutConfig& config, const LoadOptions& load = {});

// Statistics document of a stored partition on a graph.
std::string run_stats(const std::filesystem::path& input, const std::filesystem::path& partition,
                      const LoadOptions& load = {});

// Writes text to path. Throws OutputError.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace graphsom
