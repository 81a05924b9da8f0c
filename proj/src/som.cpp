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

#include "graphsom/som.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "graphsom/error.hpp"
#include "rng.hpp"
#include "seeding.hpp"

namespace graphsom {

SomGrid::SomGrid(Index rows, Index cols) : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) {
    throw ValidationError(fmt::format("grid must be at least 1x1, got {}x{}", rows, cols));
  }
}

double SomGrid::distance(Index a, Index b) const {
  const auto ca = coord(a);
  const auto cb = coord(b);
  const double dr = static_cast<double>(ca.row) - static_cast<double>(cb.row);
  const double dc = static_cast<double>(ca.col) - static_cast<double>(cb.col);
  return std::sqrt(dr * dr + dc * dc);
}

std::vector<Index> SomGrid::neighbors(Index unit) const {
  const auto c = coord(unit);
  std::vector<Index> out;
  if (c.row > 0) out.push_back(unit_at(c.row - 1, c.col));
  if (c.col > 0) out.push_back(unit_at(c.row, c.col - 1));
  if (c.col + 1 < cols_) out.push_back(unit_at(c.row, c.col + 1));
  if (c.row + 1 < rows_) out.push_back(unit_at(c.row + 1, c.col));
  return out;
}

double radius_at(double sigma_start, double sigma_end, int epoch, int epochs) {
  if (epochs <= 1) return sigma_start;
  const double t = static_cast<double>(epoch) / static_cast<double>(epochs - 1);
  return sigma_start + (sigma_end - sigma_start) * t;
}

double neighborhood(double grid_distance, double sigma) {
  return std::exp(-grid_distance * grid_distance / (2.0 * sigma * sigma));
}

namespace {

constexpr double kMinDenominator = 1e-300;

class KernelSomGeometry {
 public:
  explicit KernelSomGeometry(const Eigen::MatrixXd& k) : k_(k) {}
  Index size() const { return static_cast<Index>(k_.rows()); }

  double point_distance_sq(Index a, Index b) const {
    const auto ia = static_cast<Eigen::Index>(a);
    const auto ib = static_cast<Eigen::Index>(b);
    return std::max(0.0, k_(ia, ia) - 2.0 * k_(ia, ib) + k_(ib, ib));
  }

  // d(i, m) = K_ii - 2 (K gamma_m)_i + gamma_m K gamma_m^T
  void distances(const Eigen::MatrixXd& gamma, Eigen::MatrixXd& d) const {
    const Eigen::MatrixXd cross = k_ * gamma.transpose();  // n x M
    d.resize(k_.rows(), gamma.rows());
    for (Eigen::Index m = 0; m < gamma.rows(); ++m) {
      const double self = gamma.row(m).dot(cross.col(m));
      for (Eigen::Index i = 0; i < k_.rows(); ++i) {
        d(i, m) = std::max(0.0, k_(i, i) - 2.0 * cross(i, m) + self);
      }
    }
  }

 private:
  const Eigen::MatrixXd& k_;
};

class EuclideanSomGeometry {
 public:
  explicit EuclideanSomGeometry(const Eigen::MatrixXd& x) : x_(x) {}
  Index size() const { return static_cast<Index>(x_.rows()); }

  double point_distance_sq(Index a, Index b) const {
    return (x_.row(static_cast<Eigen::Index>(a)) - x_.row(static_cast<Eigen::Index>(b)))
        .squaredNorm();
  }

  void distances(const Eigen::MatrixXd& gamma, Eigen::MatrixXd& d) const {
    const Eigen::MatrixXd prototypes = gamma * x_;  // M x p
    d.resize(x_.rows(), gamma.rows());
    for (Eigen::Index m = 0; m < gamma.rows(); ++m) {
      for (Eigen::Index i = 0; i < x_.rows(); ++i) {
        d(i, m) = (x_.row(i) - prototypes.row(m)).squaredNorm();
      }
    }
  }

 private:
  const Eigen::MatrixXd& x_;
};

// Lowest unit among those within rounding noise of the minimum. Units with
// identical prototypes tie exactly in exact arithmetic, but the kernel and
// explicit geometries round differently, so exact comparison would let the
// two disagree.
std::vector<Index> best_matching_units(const Eigen::MatrixXd& d) {
  std::vector<Index> out(static_cast<Index>(d.rows()));
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    const double lowest = d.row(i).minCoeff();
    const double slack = 1e-10 * std::max(d.row(i).cwiseAbs().maxCoeff(), 1e-300);
    Eigen::Index best = 0;
    while (d(i, best) > lowest + slack) ++best;
    out[static_cast<Index>(i)] = static_cast<Index>(best);
  }
  return out;
}

void check_initial_gamma(const Eigen::MatrixXd& g, Index units, Index n) {
  const auto rows = static_cast<Eigen::Index>(units);
  const auto cols = static_cast<Eigen::Index>(n);
  if (g.rows() != rows || g.cols() != cols) {
    throw ValidationError(fmt::format("initial gamma must be {}x{}, got {}x{}", rows, cols,
                                      g.rows(), g.cols()));
  }
  for (Eigen::Index m = 0; m < rows; ++m) {
    if (g.row(m).minCoeff() < 0.0 || std::abs(g.row(m).sum() - 1.0) > 1e-10) {
      throw ValidationError(fmt::format("initial gamma row {} is not a convex weight vector", m));
    }
  }
}

template <class Geometry>
Eigen::MatrixXd draw_gamma(const Geometry& geo, SomInit init, Index units, detail::Rng& rng) {
  const Index n = geo.size();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(units),
                                            static_cast<Eigen::Index>(n));
  if (init == SomInit::dirichlet) {
    for (Eigen::Index m = 0; m < g.rows(); ++m) {
      for (Eigen::Index i = 0; i < g.cols(); ++i) g(m, i) = rng.exponential();
      g.row(m) /= g.row(m).sum();
    }
    return g;
  }
  const auto seeds = detail::seed_plus_plus(geo, units, rng);
  for (Index m = 0; m < units; ++m) {
    g(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(seeds[m])) = 1.0;
  }
  return g;
}

template <class Geometry>
SomModel train_once(const Geometry& geo, const SomGrid& grid, const SomOptions& options,
                    Eigen::MatrixXd gamma) {
  const Index n = geo.size();
  const Index units = grid.unit_count();

  const double sigma_end = options.sigma_end.value_or(0.5);
  const double sigma_start = options.sigma_start.value_or(
      std::max(0.5 * static_cast<double>(std::max(grid.rows(), grid.cols())), sigma_end));
  if (!(sigma_end > 0.0) || !(sigma_start >= sigma_end) || !std::isfinite(sigma_start)) {
    throw ValidationError(fmt::format(
        "radius schedule needs sigma_start >= sigma_end > 0, got ({}, {})", sigma_start,
        sigma_end));
  }

  SomModel model;
  model.grid = grid;
  model.gamma = std::move(gamma);
  model.sigma_start = sigma_start;
  model.sigma_end = sigma_end;
  model.epochs = options.epochs;
  model.seed = options.seed;
  model.bmu_rule = options.bmu_rule;

  Eigen::MatrixXd grid_dist(static_cast<Eigen::Index>(units), static_cast<Eigen::Index>(units));
  for (Index a = 0; a < units; ++a) {
    for (Index b = 0; b < units; ++b) {
      grid_dist(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = grid.distance(a, b);
    }
  }

  auto neighborhood_table = [&](double sigma) {
    return Eigen::MatrixXd(grid_dist.unaryExpr([sigma](double x) { return neighborhood(x, sigma); }));
  };
  // Matching scores: plain distances, or distances smoothed over the grid.
  auto scores = [&](const Eigen::MatrixXd& d, const Eigen::MatrixXd& h) -> Eigen::MatrixXd {
    if (options.bmu_rule == BmuRule::nearest) return d;
    return d * h;
  };

  Eigen::MatrixXd d;
  geo.distances(model.gamma, d);
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    const double sigma = radius_at(sigma_start, sigma_end, epoch, options.epochs);
    const Eigen::MatrixXd h = neighborhood_table(sigma);
    const auto bmu = best_matching_units(scores(d, h));

    Eigen::RowVectorXd row(static_cast<Eigen::Index>(n));
    for (Index m = 0; m < units; ++m) {
      const auto mm = static_cast<Eigen::Index>(m);
      for (Index i = 0; i < n; ++i) {
        row(static_cast<Eigen::Index>(i)) = h(static_cast<Eigen::Index>(bmu[i]), mm);
      }
      const double denom = row.sum();
      if (denom < kMinDenominator) continue;
      model.gamma.row(mm) = row / denom;
    }

    geo.distances(model.gamma, d);
    double energy = 0.0;
    for (Index i = 0; i < n; ++i) {
      energy += h.row(static_cast<Eigen::Index>(bmu[i])).dot(d.row(static_cast<Eigen::Index>(i)));
    }
    model.energy_trace.push_back(energy);
  }
  const double final_sigma = radius_at(sigma_start, sigma_end, options.epochs - 1, options.epochs);
  model.assignment = best_matching_units(scores(d, neighborhood_table(final_sigma)));
  return model;
}

template <class Geometry>
SomModel train(const Geometry& geo, const SomGrid& grid, const SomOptions& options) {
  const Index n = geo.size();
  const Index units = grid.unit_count();
  if (n == 0) throw ValidationError("SOM needs at least one item");
  if (options.epochs < 1) throw ValidationError("epochs must be at least 1");
  if (options.restarts < 1) throw ValidationError("restarts must be at least 1");
  if (options.initial_gamma) {
    check_initial_gamma(*options.initial_gamma, units, n);
    return train_once(geo, grid, options, *options.initial_gamma);
  }
  detail::Rng rng(options.seed);
  std::optional<SomModel> best;
  for (int r = 0; r < options.restarts; ++r) {
    SomModel model = train_once(geo, grid, options, draw_gamma(geo, options.init, units, rng));
    if (!best || detail::clearly_lower(model.energy_trace.back(), best->energy_trace.back())) {
      best = std::move(model);
    }
  }
  return std::move(*best);
}

}  // namespace

SomModel batch_kernel_som(const KernelMatrix& k, const SomGrid& grid, const SomOptions& options) {
  KernelSomGeometry geo(k.matrix());
  return train(geo, grid, options);
}

SomModel batch_som(const Eigen::MatrixXd& points, const SomGrid& grid, const SomOptions& options) {
  if (!points.allFinite()) throw NumericalError("SOM input has non-finite coordinates");
  EuclideanSomGeometry geo(points);
  return train(geo, grid, options);
}

SomModel spectral_som(const WeightedGraph& g, Index p, const SomGrid& grid,
                      const SomOptions& options) {
  if (p < 1 || p > g.vertex_count()) {
    throw ValidationError(fmt::format("p = {} must lie in 1..{}", p, g.vertex_count()));
  }
  return batch_som(spectral_embedding(laplacian(g), p), grid, options);
}

// ---------------------------------------------------------------------------
// U-matrix

namespace {

UMatrix u_matrix_from_distances(const SomModel& model, const Eigen::MatrixXd& dist) {
  const SomGrid& grid = model.grid;
  UMatrix u;
  u.rows = grid.rows();
  u.cols = grid.cols();
  u.values.resize(grid.unit_count(), 0.0);
  for (Index m = 0; m < grid.unit_count(); ++m) {
    const auto nbs = grid.neighbors(m);
    if (nbs.empty()) continue;
    double sum = 0.0;
    for (Index o : nbs) sum += dist(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(o));
    u.values[m] = sum / static_cast<double>(nbs.size());
  }
  return u;
}

void require_trained(const SomModel& model, Index n) {
  if (!model.trained()) throw ValidationError("SOM model is not trained");
  if (model.item_count() != n) {
    throw ValidationError(fmt::format("model covers {} items, data has {}", model.item_count(), n));
  }
}

}  // namespace

UMatrix u_matrix(const SomModel& model, const KernelMatrix& k) {
  require_trained(model, k.order());
  const Eigen::MatrixXd g = model.gamma * k.matrix() * model.gamma.transpose();
  const Eigen::MatrixXd gram = 0.5 * (g + g.transpose());
  const Eigen::Index units = gram.rows();
  Eigen::MatrixXd dist(units, units);
  for (Eigen::Index a = 0; a < units; ++a) {
    for (Eigen::Index b = 0; b < units; ++b) {
      dist(a, b) = std::sqrt(std::max(0.0, gram(a, a) - 2.0 * gram(a, b) + gram(b, b)));
    }
  }
  return u_matrix_from_distances(model, dist);
}

UMatrix u_matrix(const SomModel& model, const Eigen::MatrixXd& points) {
  require_trained(model, static_cast<Index>(points.rows()));
  const Eigen::MatrixXd prototypes = model.gamma * points;
  const Eigen::Index units = prototypes.rows();
  Eigen::MatrixXd dist(units, units);
  for (Eigen::Index a = 0; a < units; ++a) {
    for (Eigen::Index b = 0; b < units; ++b) {
      dist(a, b) = (prototypes.row(a) - prototypes.row(b)).norm();
    }
  }
  return u_matrix_from_distances(model, dist);
}

Eigen::MatrixXd UMatrix::upsample(int factor) const {
  if (factor < 1) throw ValidationError("upsampling factor must be at least 1");
  if (rows == 0 || cols == 0) throw ValidationError("empty U-matrix");
  const auto out_rows = static_cast<Eigen::Index>(rows) * factor;
  const auto out_cols = static_cast<Eigen::Index>(cols) * factor;
  Eigen::MatrixXd raster(out_rows, out_cols);
  auto position = [factor](Eigen::Index pixel, Index extent) {
    const double u = (static_cast<double>(pixel) + 0.5) / factor - 0.5;
    return std::clamp(u, 0.0, static_cast<double>(extent - 1));
  };
  for (Eigen::Index y = 0; y < out_rows; ++y) {
    const double uy = position(y, rows);
    const auto r0 = static_cast<Index>(std::floor(uy));
    const Index r1 = std::min(r0 + 1, rows - 1);
    const double fy = uy - static_cast<double>(r0);
    for (Eigen::Index x = 0; x < out_cols; ++x) {
      const double ux = position(x, cols);
      const auto c0 = static_cast<Index>(std::floor(ux));
      const Index c1 = std::min(c0 + 1, cols - 1);
      const double fx = ux - static_cast<double>(c0);
      const double top = (1.0 - fx) * at(r0, c0) + fx * at(r0, c1);
      const double bottom = (1.0 - fx) * at(r1, c0) + fx * at(r1, c1);
      raster(y, x) = (1.0 - fy) * top + fy * bottom;
    }
  }
  return raster;
}

// ---------------------------------------------------------------------------

SomPartition som_partition(const SomModel& model, std::string method_tag, Params params) {
  if (!model.trained()) throw ValidationError("SOM model is not trained");
  const Index units = model.grid.unit_count();
  std::vector<Index> counts(units, 0);
  for (Index u : model.assignment) {
    if (u >= units) throw ValidationError(fmt::format("assignment to unit {} outside grid", u));
    ++counts[u];
  }
  SomPartition out{Partition::compact(model.assignment, std::move(method_tag), std::move(params)),
                   {}};
  for (Index u = 0; u < units; ++u) {
    if (counts[u] > 0) out.cluster_units.push_back(u);
  }
  return out;
}

}  // namespace graphsom
