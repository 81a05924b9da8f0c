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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "graphsom/clustering.hpp"
#include "graphsom/error.hpp"
#include "graphsom/linalg.hpp"
#include "graphsom/som.hpp"
#include "support/fixtures.hpp"

using namespace graphsom;
using graphsom::testing::TestRng;
using graphsom::testing::random_graph;

namespace {

SomOptions frozen(double sigma, int epochs, std::uint64_t seed) {
  SomOptions o;
  o.epochs = epochs;
  o.sigma_start = sigma;
  o.sigma_end = sigma;
  o.seed = seed;
  return o;
}

void check_convex_rows(const Eigen::MatrixXd& gamma) {
  CHECK(gamma.minCoeff() >= -1e-12);
  for (Eigen::Index m = 0; m < gamma.rows(); ++m) {
    CHECK(std::abs(gamma.row(m).sum() - 1.0) <= 1e-10);
  }
}

Eigen::MatrixXd random_gamma(Index units, Index n, std::uint64_t seed) {
  TestRng rng(seed);
  Eigen::MatrixXd g(static_cast<Eigen::Index>(units), static_cast<Eigen::Index>(n));
  for (Eigen::Index m = 0; m < g.rows(); ++m) {
    for (Eigen::Index i = 0; i < g.cols(); ++i) g(m, i) = rng.uniform() + 1e-3;
    g.row(m) /= g.row(m).sum();
  }
  return g;
}

SomModel indicator_model(Index rows, Index cols, const Eigen::MatrixXd& gamma) {
  SomModel model;
  model.grid = SomGrid(rows, cols);
  model.gamma = gamma;
  model.assignment.assign(static_cast<Index>(gamma.cols()), 0);
  return model;
}

}  // namespace

TEST_CASE("grid: lattice coordinates, distances and neighbors") {
  const SomGrid g(3, 4);
  CHECK(g.unit_count() == 12);
  for (Index u = 0; u < 12; ++u) {
    CHECK(g.unit_at(g.coord(u).row, g.coord(u).col) == u);
  }
  CHECK(g.coord(5).row == 1);
  CHECK(g.coord(5).col == 1);
  CHECK(g.distance(0, 11) == doctest::Approx(std::sqrt(4.0 + 9.0)));
  CHECK(g.neighbors(0) == std::vector<Index>{1, 4});
  CHECK(g.neighbors(5) == std::vector<Index>{1, 4, 6, 9});
  CHECK_THROWS_AS(SomGrid(0, 3), ValidationError);
}

TEST_CASE("radius schedule and neighborhood") {
  CHECK(radius_at(3.0, 0.5, 0, 11) == 3.0);
  CHECK(radius_at(3.0, 0.5, 10, 11) == 0.5);
  CHECK(radius_at(3.0, 0.5, 5, 11) == doctest::Approx(1.75));
  CHECK(neighborhood(0.0, 0.7) == 1.0);
  CHECK(neighborhood(2.0, 1.0) == doctest::Approx(std::exp(-2.0)));
}

TEST_CASE("single unit: uniform weights and the centroid") {
  const auto x = testing::random_points(7, 3, 1);
  SomOptions o;
  o.epochs = 5;
  const auto model = batch_som(x, SomGrid(1, 1), o);
  for (Eigen::Index i = 0; i < 7; ++i) CHECK(model.gamma(0, i) == doctest::Approx(1.0 / 7));
  const Eigen::RowVectorXd centroid = x.colwise().mean();
  CHECK(((model.gamma * x).row(0) - centroid).norm() <= 1e-12);
  CHECK(std::all_of(model.assignment.begin(), model.assignment.end(), [](Index u) { return u == 0; }));
  const auto k = batch_kernel_som(gram_kernel(x), SomGrid(1, 1), o);
  CHECK(som_partition(k).partition.cluster_count() == 1);
}

TEST_CASE("gamma rows stay convex after every epoch") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto k = heat_kernel(laplacian(random_graph(30, 80, seed)), 0.5);
    const SomGrid grid(3, 3);
    Eigen::MatrixXd gamma = random_gamma(9, 30, seed);
    for (int epoch = 0; epoch < 20; ++epoch) {
      SomOptions o;
      o.epochs = 1;
      o.sigma_start = o.sigma_end = 1.5 - 0.05 * epoch;
      o.initial_gamma = gamma;
      gamma = batch_kernel_som(k, grid, o).gamma;
      check_convex_rows(gamma);
    }
  }
}

TEST_CASE("local-distortion rule descends with a frozen radius") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto k = heat_kernel(laplacian(random_graph(40, 120, seed + 40)), 0.5);
    auto o = frozen(1.0, 50, seed);
    o.bmu_rule = BmuRule::local_distortion;
    const auto model = batch_kernel_som(k, SomGrid(3, 3), o);
    REQUIRE(model.energy_trace.size() == 50);
    for (std::size_t t = 1; t < model.energy_trace.size(); ++t) {
      CHECK(model.energy_trace[t] <= model.energy_trace[t - 1] * (1 + 1e-12) + 1e-12);
    }
  }
}

TEST_CASE("kernel SOM on a Gram matrix trains the same map as the Euclidean SOM") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    TestRng rng(seed + 70);
    const Index n = 6 + rng.index(25);
    const auto x = testing::random_points(n, 1 + rng.index(4), seed + 70);
    SomOptions o;
    o.epochs = 30;
    o.seed = seed;
    o.restarts = 2;
    const SomGrid grid(2, 3);
    for (auto rule : {BmuRule::nearest, BmuRule::local_distortion}) {
      o.bmu_rule = rule;
      const auto a = batch_som(x, grid, o);
      const auto b = batch_kernel_som(gram_kernel(x), grid, o);
      CHECK(a.assignment == b.assignment);
      CHECK(std::abs(a.energy_trace.back() - b.energy_trace.back()) <= 1e-6);
    }
  }
}

TEST_CASE("two cliques on a 1x2 map") {
  const auto g = testing::two_cliques(10);
  const auto truth = connected_components(g);
  SomOptions o;
  o.seed = 5;
  o.restarts = 10;
  const auto km = batch_kernel_som(heat_kernel(laplacian(g), kDefaultBeta), SomGrid(1, 2), o);
  const auto sp = spectral_som(g, 2, SomGrid(1, 2), o);
  for (const auto* model : {&km, &sp}) {
    const auto part = som_partition(*model).partition;
    CHECK(part.same_clusters_as(truth));
    CHECK(std::abs(q_modularity(g, part) - 0.5) <= 1e-12);
  }
  // Final sigma 0.5: a unit keeps weight h(1) = e^-2 per vertex of the
  // other clique, so its own clique holds 1 / (1 + e^-2) of the mass.
  const double own = 1.0 / (1.0 + std::exp(-2.0));
  for (Eigen::Index m = 0; m < 2; ++m) {
    const double first = km.gamma.row(m).head(10).sum();
    CHECK(std::abs(std::max(first, 1.0 - first) - own) <= 1e-12);
  }
}

TEST_CASE("two cliques: U-matrix agrees with explicit coordinates") {
  const auto g = testing::two_cliques(10);
  const auto k = heat_kernel(laplacian(g), kDefaultBeta);
  SomOptions o;
  o.restarts = 5;
  const auto model = batch_kernel_som(k, SomGrid(1, 2), o);
  const auto um = u_matrix(model, k);
  const auto x = kernel_feature_coordinates(k);
  const Eigen::MatrixXd protos = model.gamma * x;
  const double oracle = (protos.row(0) - protos.row(1)).norm();
  CHECK(oracle > 0.0);
  CHECK(std::abs(um.at(0, 0) - oracle) <= 1e-6);
  CHECK(std::abs(um.at(0, 1) - oracle) <= 1e-6);
}

TEST_CASE("U-matrix closed forms") {
  const KernelMatrix id(Eigen::MatrixXd::Identity(2, 2));
  const auto um = u_matrix(indicator_model(1, 2, Eigen::MatrixXd::Identity(2, 2)), id);
  CHECK(std::abs(um.at(0, 0) - std::sqrt(2.0)) <= 1e-10);
  CHECK(std::abs(um.at(0, 1) - std::sqrt(2.0)) <= 1e-10);

  const Eigen::MatrixXd same = Eigen::MatrixXd::Constant(9, 4, 0.25);
  const auto flat = u_matrix(indicator_model(3, 3, same), gram_kernel(testing::random_points(4, 2, 3)));
  for (double v : flat.values) CHECK(std::abs(v) <= 1e-10);

  SomModel untrained;
  CHECK_THROWS_AS(u_matrix(untrained, id), ValidationError);
}

TEST_CASE("U-matrix is the mean of symmetric neighbor distances") {
  const auto x = testing::random_points(12, 3, 4);
  const auto k = gram_kernel(x);
  const auto model = indicator_model(3, 3, random_gamma(9, 12, 9));
  const auto um = u_matrix(model, k);
  const auto from_points = u_matrix(model, x);
  const Eigen::MatrixXd protos = model.gamma * x;
  for (Index u = 0; u < 9; ++u) {
    double total = 0.0;
    const auto nbs = model.grid.neighbors(u);
    for (Index v : nbs) {
      total += (protos.row(static_cast<Eigen::Index>(u)) - protos.row(static_cast<Eigen::Index>(v))).norm();
    }
    CHECK(std::abs(um.values[u] - total / static_cast<double>(nbs.size())) <= 1e-8);
    CHECK(std::abs(from_points.values[u] - um.values[u]) <= 1e-8);
    CHECK(um.values[u] >= 0.0);
  }
}

TEST_CASE("U-matrix upsampling keeps unit values at cell centers") {
  UMatrix um;
  um.rows = 2;
  um.cols = 2;
  um.values = {0.0, 1.0, 2.0, 3.0};
  const auto r = um.upsample(4);
  CHECK(r.rows() == 8);
  CHECK(r.cols() == 8);
  CHECK(r.minCoeff() >= 0.0);
  CHECK(r.maxCoeff() <= 3.0);
  CHECK(r(0, 0) == doctest::Approx(0.0));
  CHECK(r(7, 7) == doctest::Approx(3.0));
  CHECK_THROWS_AS(um.upsample(0), ValidationError);
}

TEST_CASE("som partition: nonempty units in row-major order") {
  SomModel model = indicator_model(2, 3, Eigen::MatrixXd::Constant(6, 5, 0.2));
  model.assignment = {4, 1, 4, 5, 1};
  const auto sp = som_partition(model, "t");
  CHECK(sp.cluster_units == std::vector<Index>{1, 4, 5});
  CHECK(std::vector<Index>(sp.partition.assignment().begin(), sp.partition.assignment().end()) ==
        std::vector<Index>{1, 0, 1, 2, 0});
  CHECK(sp.partition.method_tag() == "t");
}

TEST_CASE("assignment is the nearest unit under the final prototypes") {
  const auto k = heat_kernel(laplacian(random_graph(35, 90, 6)), 0.3);
  SomOptions o;
  o.epochs = 20;
  const auto model = batch_kernel_som(k, SomGrid(3, 3), o);
  for (Index i = 0; i < 35; ++i) {
    double best = std::numeric_limits<double>::infinity();
    Index arg = 0;
    for (Index m = 0; m < 9; ++m) {
      const Eigen::RowVectorXd row = model.gamma.row(static_cast<Eigen::Index>(m));
      const double d = kernel_distance_sq(k, i, std::span<const double>(row.data(), 35));
      if (d < best - 1e-12) {
        best = d;
        arg = m;
      }
    }
    CHECK(model.assignment[i] == arg);
  }
}

TEST_CASE("permuting the items permutes the assignment") {
  const auto k = heat_kernel(laplacian(random_graph(20, 50, 12)), 0.4);
  std::vector<Index> perm(20);
  std::iota(perm.begin(), perm.end(), Index{0});
  std::reverse(perm.begin(), perm.end());
  std::swap(perm[3], perm[11]);
  Eigen::MatrixXd kp(20, 20);
  const Eigen::MatrixXd g0 = random_gamma(4, 20, 2);
  Eigen::MatrixXd gp(4, 20);
  for (Index i = 0; i < 20; ++i) {
    for (Index j = 0; j < 20; ++j) {
      kp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = k(perm[i], perm[j]);
    }
    gp.col(static_cast<Eigen::Index>(i)) = g0.col(static_cast<Eigen::Index>(perm[i]));
  }
  SomOptions o;
  o.epochs = 25;
  o.initial_gamma = g0;
  const auto a = batch_kernel_som(k, SomGrid(2, 2), o);
  o.initial_gamma = gp;
  const auto b = batch_kernel_som(KernelMatrix(kp), SomGrid(2, 2), o);
  for (Index i = 0; i < 20; ++i) CHECK(b.assignment[i] == a.assignment[perm[i]]);
}

TEST_CASE("training is deterministic and validates options") {
  const auto k = heat_kernel(laplacian(random_graph(25, 60, 3)), 0.2);
  SomOptions o;
  o.epochs = 15;
  o.seed = 42;
  o.restarts = 3;
  const auto a = batch_kernel_som(k, SomGrid(2, 2), o);
  const auto b = batch_kernel_som(k, SomGrid(2, 2), o);
  CHECK(a.assignment == b.assignment);
  CHECK(a.gamma == b.gamma);
  CHECK(a.energy_trace == b.energy_trace);

  auto bad = o;
  bad.epochs = 0;
  CHECK_THROWS_AS(batch_kernel_som(k, SomGrid(2, 2), bad), ValidationError);
  bad = o;
  bad.sigma_start = 0.2;
  bad.sigma_end = 0.5;
  CHECK_THROWS_AS(batch_kernel_som(k, SomGrid(2, 2), bad), ValidationError);
  bad = o;
  bad.initial_gamma = Eigen::MatrixXd::Constant(4, 25, 0.5);
  CHECK_THROWS_AS(batch_kernel_som(k, SomGrid(2, 2), bad), ValidationError);
}

TEST_CASE("restarts keep the lowest final energy") {
  const auto k = heat_kernel(laplacian(random_graph(40, 100, 8)), 0.3);
  SomOptions o;
  o.epochs = 20;
  o.seed = 3;
  o.restarts = 6;
  const auto best = batch_kernel_som(k, SomGrid(3, 3), o);
  o.restarts = 1;
  const auto single = batch_kernel_som(k, SomGrid(3, 3), o);
  CHECK(best.energy_trace.back() <= single.energy_trace.back());
}

TEST_CASE("spectral SOM with p equal to n is batch SOM on all eigencoordinates") {
  const auto g = random_graph(15, 30, 2);
  SomOptions o;
  o.epochs = 20;
  o.seed = 9;
  const auto a = spectral_som(g, 15, SomGrid(2, 2), o);
  const auto b = batch_som(spectral_embedding(laplacian(g), 15), SomGrid(2, 2), o);
  CHECK(a.assignment == b.assignment);
  CHECK_THROWS_AS(spectral_som(g, 16, SomGrid(2, 2), o), ValidationError);
}
