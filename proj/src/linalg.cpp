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

#include "graphsom/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <fmt/format.h>

#include "graphsom/error.hpp"

namespace graphsom {

namespace {

double off_diagonal_norm_sq(const Eigen::MatrixXd& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j) s += a(i, j) * a(i, j);
    }
  }
  return s;
}

// Applies the rotation that zeroes a(p, q), p < q, to a (both sides) and to
// the accumulated eigenvectors v (right side only).
void rotate(Eigen::MatrixXd& a, Eigen::MatrixXd& v, Eigen::Index p, Eigen::Index q,
            Eigen::VectorXd& scratch_p, Eigen::VectorXd& scratch_q) {
  const double apq = a(p, q);
  const double app = a(p, p);
  const double aqq = a(q, q);
  const double theta = (aqq - app) / (2.0 * apq);
  double t = 0.5 / theta;  // theta * theta would overflow
  if (std::abs(theta) < 1e150) {
    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    if (theta < 0.0) t = -t;
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  scratch_p = c * a.col(p) - s * a.col(q);
  scratch_q = s * a.col(p) + c * a.col(q);
  a.col(p) = scratch_p;
  a.col(q) = scratch_q;
  a.row(p) = scratch_p.transpose();
  a.row(q) = scratch_q.transpose();
  a(p, p) = app - t * apq;
  a(q, q) = aqq + t * apq;
  a(p, q) = 0.0;
  a(q, p) = 0.0;

  scratch_p = c * v.col(p) - s * v.col(q);
  scratch_q = s * v.col(p) + c * v.col(q);
  v.col(p) = scratch_p;
  v.col(q) = scratch_q;
}

}  // namespace

EigenDecomposition eigendecompose_symmetric(const SymmetricMatrix& m,
                                            const JacobiOptions& options) {
  Eigen::MatrixXd a = m.matrix();
  if (!a.allFinite()) throw NumericalError("eigendecomposition input has non-finite entries");

  const Eigen::Index n = a.rows();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double target = options.relative_tolerance * a.norm();
  Eigen::VectorXd scratch_p(n);
  Eigen::VectorXd scratch_q(n);

  int sweep = 0;
  double residual = std::sqrt(off_diagonal_norm_sq(a));
  while (residual > target) {
    if (sweep >= options.max_sweeps) {
      throw NumericalError(fmt::format(
          "Jacobi eigensolver did not converge in {} sweeps (off-diagonal residual {:.3e}, "
          "target {:.3e})",
          options.max_sweeps, residual, target));
    }
    // Early sweeps skip small entries; later sweeps flush entries that are
    // negligible next to both diagonal terms.
    const double threshold =
        sweep < 3 ? 0.2 * residual / static_cast<double>(n * n) : 0.0;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = std::abs(a(p, q));
        if (apq == 0.0) continue;
        if (sweep >= 4 && 100.0 * apq + std::abs(a(p, p)) == std::abs(a(p, p)) &&
            100.0 * apq + std::abs(a(q, q)) == std::abs(a(q, q))) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        if (apq <= threshold) continue;
        rotate(a, v, p, q, scratch_p, scratch_q);
      }
    }
    ++sweep;
    residual = std::sqrt(off_diagonal_norm_sq(a));
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x) < a(y, y); });

  EigenDecomposition out;
  out.sweeps = sweep;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    out.eigenvalues(j) = a(src, src);
    auto col = out.eigenvectors.col(j);
    col = v.col(src);
    Eigen::Index arg = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
      if (std::abs(col(i)) > std::abs(col(arg))) arg = i;
    }
    if (col(arg) < 0.0) col = -col;
  }
  return out;
}

// ---------------------------------------------------------------------------

KernelMatrix::KernelMatrix(Eigen::MatrixXd entries, std::optional<double> beta)
    : k_(std::move(entries)), beta_(beta) {
  if (k_.rows() == 0 || k_.rows() != k_.cols()) {
    throw ValidationError(fmt::format("kernel matrix must be square and non-empty, got {}x{}",
                                      k_.rows(), k_.cols()));
  }
  if (!k_.allFinite()) throw NumericalError("kernel matrix has non-finite entries");
  const double scale = std::max(1.0, k_.cwiseAbs().maxCoeff());
  const double asym = (k_ - k_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw ValidationError(fmt::format("kernel matrix is not symmetric (max asymmetry {:.3e})",
                                      asym));
  }
}

KernelMatrix heat_kernel(const EigenDecomposition& spectrum, double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw ValidationError(fmt::format("heat kernel requires beta >= 0, got {}", beta));
  }
  const Eigen::Index n = spectrum.eigenvectors.rows();
  if (beta == 0.0) return KernelMatrix(Eigen::MatrixXd::Identity(n, n), beta);

  const Eigen::VectorXd decay = (-beta * spectrum.eigenvalues).array().exp();
  const Eigen::MatrixXd scaled = spectrum.eigenvectors * decay.asDiagonal();
  Eigen::MatrixXd k = scaled * spectrum.eigenvectors.transpose();
  Eigen::MatrixXd sym = 0.5 * (k + k.transpose());
  return KernelMatrix(std::move(sym), beta);
}

KernelMatrix heat_kernel(const SymmetricMatrix& laplacian, double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw ValidationError(fmt::format("heat kernel requires beta >= 0, got {}", beta));
  }
  if (beta == 0.0) {
    const auto n = static_cast<Eigen::Index>(laplacian.order());
    return KernelMatrix(Eigen::MatrixXd::Identity(n, n), beta);
  }
  return heat_kernel(eigendecompose_symmetric(laplacian), beta);
}

Eigen::MatrixXd spectral_embedding(const EigenDecomposition& spectrum, Index p) {
  const Eigen::Index n = spectrum.eigenvectors.rows();
  if (p < 1 || p > static_cast<Index>(n)) {
    throw ValidationError(fmt::format("embedding dimension p = {} outside 1..{}", p, n));
  }
  return spectrum.eigenvectors.leftCols(static_cast<Eigen::Index>(p));
}

Eigen::MatrixXd spectral_embedding(const SymmetricMatrix& laplacian, Index p) {
  if (p < 1 || p > laplacian.order()) {
    throw ValidationError(fmt::format("embedding dimension p = {} outside 1..{}", p,
                                      laplacian.order()));
  }
  return spectral_embedding(eigendecompose_symmetric(laplacian), p);
}

Eigen::MatrixXd kernel_feature_coordinates(const KernelMatrix& k) {
  const Eigen::MatrixXd& m = k.matrix();
  const auto spectrum = eigendecompose_symmetric(SymmetricMatrix(0.5 * (m + m.transpose())));
  const double lambda_min = spectrum.eigenvalues.minCoeff();
  const double lambda_max = spectrum.eigenvalues.maxCoeff();
  if (lambda_min < -1e-8 * std::max(lambda_max, 0.0) && lambda_min < 0.0) {
    throw NumericalError(fmt::format(
        "kernel is not positive semi-definite (lambda_min = {:.3e}, lambda_max = {:.3e})",
        lambda_min, lambda_max));
  }
  const Eigen::VectorXd roots = spectrum.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  return spectrum.eigenvectors * roots.asDiagonal();
}

KernelMatrix gram_kernel(const Eigen::MatrixXd& points) {
  const Eigen::MatrixXd g = points * points.transpose();
  return KernelMatrix(0.5 * (g + g.transpose()));
}

}  // namespace graphsom
