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

// graphsom command-line tool: cluster, attrs, layout, stats.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "graphsom/graphsom.h"

namespace {

int report(gs_status status) {
  if (status != GS_OK) std::fprintf(stderr, "graphsom: %s\n", gs_last_error_message());
  return static_cast<int>(status);
}

int usage_error(const std::string& message) {
  std::fprintf(stderr, "graphsom: %s\n", message.c_str());
  return GS_ERR_VALIDATION;
}

const char* c_str_or_null(const std::optional<std::string>& s) {
  return s ? s->c_str() : nullptr;
}

// "S,E"
bool parse_radius(const std::string& text, double& start, double& end) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return false;
  const char* first = text.data();
  const char* mid = first + comma;
  const char* last = first + text.size();
  auto a = std::from_chars(first, mid, start);
  auto b = std::from_chars(mid + 1, last, end);
  return a.ec == std::errc() && a.ptr == mid && b.ec == std::errc() && b.ptr == last;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph clustering with spectral methods, kernels and self-organizing maps",
               "graphsom"};
  app.require_subcommand(1);
  app.set_version_flag("--version", gs_version());

  // cluster
  auto* cluster = app.add_subcommand("cluster", "cluster a graph and write a partition document");
  std::string c_input, c_method, c_out;
  std::optional<std::size_t> c_k, c_p;
  std::optional<double> c_beta;
  std::optional<std::string> c_grid, c_radius, c_report;
  std::optional<int> c_epochs, c_restarts;
  std::uint64_t c_seed = 0;
  cluster->add_option("--input", c_input, "edge list")->required();
  cluster->add_option("--method", c_method, "spectral|kernel-kmeans|spectral-som|kernel-som")
      ->required()
      ->check(CLI::IsMember({"spectral", "kernel-kmeans", "spectral-som", "kernel-som"}));
  cluster->add_option("--k", c_k, "number of clusters (default 50)");
  cluster->add_option("--p", c_p, "eigenvectors used by spectral methods (default k, or 50)");
  cluster->add_option("--beta", c_beta, "heat kernel diffusion time (default 0.05)");
  cluster->add_option("--grid", c_grid, "map grid RxC, required by SOM methods");
  cluster->add_option("--epochs", c_epochs, "SOM epochs (default 100)");
  cluster->add_option("--radius", c_radius, "SOM neighborhood radius schedule S,E");
  cluster->add_option("--restarts", c_restarts, "independent initializations, best kept (default 10)");
  cluster->add_option("--seed", c_seed, "random seed")->required();
  cluster->add_option("--out", c_out, "partition document path")->required();
  cluster->add_option("--report", c_report, "report document path");

  // attrs
  auto* attrs = app.add_subcommand("attrs", "summarize vertex attributes per cluster");
  std::string a_partition, a_attributes, a_out;
  attrs->add_option("--partition", a_partition, "partition document")->required();
  attrs->add_option("--attributes", a_attributes, "attribute file")->required();
  attrs->add_option("--out", a_out, "summary document path")->required();

  // layout
  auto* layout = app.add_subcommand("layout", "draw a partition or a trained map");
  std::string l_mode, l_input, l_svg;
  std::optional<std::string> l_partition, l_model, l_dot;
  std::optional<int> l_iterations;
  std::uint64_t l_seed = 0;
  layout->add_option("--mode", l_mode, "summary|map|full")
      ->required()
      ->check(CLI::IsMember({"summary", "map", "full"}));
  layout->add_option("--input", l_input, "edge list")->required();
  auto* l_part_opt = layout->add_option("--partition", l_partition, "partition document");
  auto* l_model_opt = layout->add_option("--model", l_model, "partition document with a trained map");
  l_part_opt->excludes(l_model_opt);
  layout->add_option("--svg", l_svg, "SVG output path")->required();
  layout->add_option("--dot", l_dot, "DOT output path");
  layout->add_option("--iterations", l_iterations, "layout iterations (500 summary, 1000 full)");
  layout->add_option("--seed", l_seed, "random seed")->required();

  // stats
  auto* stats = app.add_subcommand("stats", "print statistics of a stored partition");
  std::string s_input, s_partition;
  stats->add_option("--input", s_input, "edge list")->required();
  stats->add_option("--partition", s_partition, "partition document")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return GS_ERR_VALIDATION;
  }

  if (cluster->parsed()) {
    gs_cluster_config config;
    gs_cluster_config_init(&config);
    config.input = c_input.c_str();
    config.method = c_method.c_str();
    if (c_k) {
      config.has_k = 1;
      config.k = *c_k;
    }
    if (c_p) {
      config.has_p = 1;
      config.p = *c_p;
    }
    if (c_beta) {
      config.has_beta = 1;
      config.beta = *c_beta;
    }
    config.grid = c_str_or_null(c_grid);
    if (c_epochs) {
      config.has_epochs = 1;
      config.epochs = *c_epochs;
    }
    if (c_radius) {
      if (!parse_radius(*c_radius, config.radius_start, config.radius_end)) {
        return usage_error("--radius expects S,E");
      }
      config.has_radius = 1;
    }
    if (c_restarts) {
      config.has_restarts = 1;
      config.restarts = *c_restarts;
    }
    config.seed = c_seed;
    config.out = c_out.c_str();
    config.report = c_str_or_null(c_report);
    return report(gs_run_cluster(&config));
  }

  if (attrs->parsed()) {
    return report(gs_run_attrs(a_partition.c_str(), a_attributes.c_str(), a_out.c_str()));
  }

  if (layout->parsed()) {
    if (!l_partition && !l_model) return usage_error("layout needs --partition or --model");
    gs_layout_config config;
    gs_layout_config_init(&config);
    config.mode = l_mode.c_str();
    config.input = l_input.c_str();
    config.partition = c_str_or_null(l_partition);
    config.model = c_str_or_null(l_model);
    config.svg = l_svg.c_str();
    config.dot = c_str_or_null(l_dot);
    if (l_iterations) {
      config.has_iterations = 1;
      config.iterations = *l_iterations;
    }
    config.seed = l_seed;
    return report(gs_run_layout(&config));
  }

  char* text = nullptr;
  const gs_status status = gs_run_stats(s_input.c_str(), s_partition.c_str(), &text);
  if (status == GS_OK) {
    std::fputs(text, stdout);
    gs_string_free(text);
  }
  return report(status);
}
