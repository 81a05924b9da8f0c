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

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "graphsom/graph.hpp"
#include "rng.hpp"

namespace graphsom::detail {

// Restart selection. A later restart replaces the incumbent only when it is
// lower by more than rounding noise, so mirror-image optima (equal energy in
// exact arithmetic) resolve to the earliest restart whatever the geometry.
inline bool clearly_lower(double candidate, double incumbent) {
  return candidate < incumbent - 1e-9 * std::max(std::abs(incumbent), 1e-300);
}

// k-means++ seeding: the first item uniformly, each further one with
// probability proportional to its squared distance to the nearest pick.
// Geometry needs size() and point_distance_sq(a, b).
template <class Geometry>
std::vector<Index> seed_plus_plus(const Geometry& geo, Index k, detail::Rng& rng) {
  const Index n = geo.size();
  std::vector<Index> seeds;
  seeds.reserve(k);
  seeds.push_back(rng.index(n));
  std::vector<double> nearest(n);
  for (Index j = 0; j < n; ++j) nearest[j] = geo.point_distance_sq(j, seeds[0]);

  while (seeds.size() < k) {
    double total = 0.0;
    for (double v : nearest) total += v;
    const double u = rng.uniform();
    Index pick = 0;
    if (total > 0.0) {
      const double target = u * total;
      double cumulative = 0.0;
      pick = n;
      Index last_positive = 0;
      for (Index j = 0; j < n; ++j) {
        if (nearest[j] <= 0.0) continue;
        last_positive = j;
        cumulative += nearest[j];
        if (cumulative > target) {
          pick = j;
          break;
        }
      }
      if (pick == n) pick = last_positive;
    } else {
      pick = std::min(static_cast<Index>(u * static_cast<double>(n)), n - 1);
    }
    seeds.push_back(pick);
    for (Index j = 0; j < n; ++j) {
      nearest[j] = std::min(nearest[j], geo.point_distance_sq(j, pick));
    }
  }
  return seeds;
}

}  // namespace graphsom::detail
