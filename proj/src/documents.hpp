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

// JSON pieces shared by the pipeline runs. Internal.

#pragma once

#include <string>

#include <json.hpp>

#include "graphsom/pipeline.hpp"

namespace graphsom::detail {

using Json = nlohmann::ordered_json;

// Report precision for q-modularity.
double round_places(double value, int places);

Json stats_json(const PartitionStats& stats);
Json config_json(const ClusterConfig& config);
std::string grid_text(Index rows, Index cols);

// Pretty-printed with a trailing newline.
std::string dump(const Json& doc);

}  // namespace graphsom::detail
