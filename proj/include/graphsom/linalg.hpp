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

// Dense symmetric eigensolver, spectral embeddings and the heat kernel.

#pragma once

#include <optional>

#include <Eigen/Dense>

#include "graphsom/graph.hpp"

namespace graphsom {

// Eigenpairs sorted by ascending eigenvalue. Column j of `eigenvectors` pairs
// with eigenvalues[j]; each column has its largest-magnitude entry
// nonnegative (first such entry on ties).
struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  int sweeps = 0;
};

struct JacobiOptions {
  // Stop once the off-diagonal Frobenius norm is <= tolerance * ||M||_F.
  double relative_tolerance = 1e-12;
  int max_sweeps = 100;
};

// Cyclic Jacobi rotations. Throws NumericalError on non-finite input or when
// the sweep cap is exhausted (the message carries the residual).
EigenDecomposition eigendecompose_symmetric(const SymmetricMatrix& m,
                                            const JacobiOptions& options = {});

// Symmetric similarity matrix, optionally tagged with the diffusion time it
// was built from.
class KernelMatrix {
 public:
  // Throws ValidationError unless square, finite and symmetric within 1e-12
  // (relative to the largest entry).
  explicit KernelMatrix(Eigen::MatrixXd entries, std::optional<double> beta = std::nullopt);

  Index order() const { return static_cast<Index>(k_.rows()); }
  double operator()(Index i, Index j) const { return k_(i, j); }
  const Eigen::MatrixXd& matrix() const { return k_; }
  std::optional<double> beta() const { return beta_; }

 private:
  Eigen::MatrixXd k_;
  std::optional<double> beta_;
};

inline constexpr double kDefaultBeta = 0.05;

// exp(-beta * L) through the eigendecomposition of L, symmetrized.
// beta == 0 returns the identity exactly; beta < 0 throws ValidationError.
KernelMatrix heat_kernel(const SymmetricMatrix& laplacian, double beta);
KernelMatrix heat_kernel(const EigenDecomposition& laplacian_spectrum, double beta);

// Rows are vertex coordinates on the eigenvectors of the p smallest
// eigenvalues, equally weighted. Requires 1 <= p <= n.
Eigen::MatrixXd spectral_embedding(const SymmetricMatrix& laplacian, Index p);
Eigen::MatrixXd spectral_embedding(const EigenDecomposition& laplacian_spectrum, Index p);

// Explicit feature map X with X * X^T == K. Negative eigenvalues of K are
// clamped to zero here only. Throws NumericalError when
// lambda_min(K) < -1e-8 * lambda_max(K).
Eigen::MatrixXd kernel_feature_coordinates(const KernelMatrix& k);

// Gram matrix X * X^T of explicit points (rows), symmetrized.
KernelMatrix gram_kernel(const Eigen::MatrixXd& points);

}  // namespace graphsom
