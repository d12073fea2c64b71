// Copyright 2026 the sketchif authors
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

#ifndef SKETCHIF_COMPACT_EIGEN_HPP
#define SKETCHIF_COMPACT_EIGEN_HPP

#include <Eigen/Dense>

#include "sketchif/symmetric_matrix.hpp"

namespace sketchif {

/// Numerical rank policy: an eigenvalue is kept when it exceeds
/// max(abs_tol, rel_tol * lambda_max). The two tolerances may not both be
/// zero.
struct RankPolicy {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;

  double cutoff(double lambda_max) const {
    const double lm = lambda_max > 0.0 ? lambda_max : 0.0;
    const double c = rel_tol * lm;
    return c > abs_tol ? c : abs_tol;
  }

  void validate() const {
    if (rel_tol < 0.0 || abs_tol < 0.0) {
      throw OutOfRangeParamError("RankPolicy: negative tolerance");
    }
    if (rel_tol == 0.0 && abs_tol == 0.0) {
      throw OutOfRangeParamError("RankPolicy: rel_tol and abs_tol both zero");
    }
  }
};

/// Compact eigendecomposition U diag(lambdas) U^T of a PSD matrix.
///
/// Eigenvalues are strictly positive and sorted descending; U has
/// orthonormal columns with the first nonzero entry of each column
/// positive, so outputs are deterministic across runs.
class CompactEigen {
 public:
  CompactEigen(Index dim, MatrixXd basis, VectorXd lambdas, RankPolicy policy)
      : dim_(dim),
        basis_(std::move(basis)),
        lambdas_(std::move(lambdas)),
        policy_(policy) {}

  Index dim() const { return dim_; }
  Index rank() const { return lambdas_.size(); }
  const MatrixXd& basis() const { return basis_; }
  const VectorXd& lambdas() const { return lambdas_; }
  const RankPolicy& policy() const { return policy_; }

  /// Largest eigenvalue; 0 for the rank-zero operator.
  double lambda_max() const { return rank() > 0 ? lambdas_(0) : 0.0; }

  /// U diag(lambdas) U^T v, the represented operator applied to v.
  VectorXd apply(const VectorXd& v) const;

  /// Orthogonal projection of v onto the range, U U^T v.
  VectorXd project_range(const VectorXd& v) const;

  /// U diag(lambdas) U^T as a dense matrix (test support).
  MatrixXd reconstruct() const;

 private:
  Index dim_;
  MatrixXd basis_;   // d x r, column-orthonormal
  VectorXd lambdas_; // r, descending, > 0
  RankPolicy policy_;
};

/// Compact eigendecomposition of a PSD matrix under `policy`.
///
/// Eigenvalues within the cutoff of zero (of either sign) are discarded;
/// an eigenvalue below -cutoff raises NotPsdError.
CompactEigen compact_eig(const SymmetricMatrix& f, RankPolicy policy = {});

/// Builds a CompactEigen directly from eigenpairs of a PSD operator,
/// applying the same thresholding and sign normalization as compact_eig.
/// `eigenvalues` need not be sorted.
CompactEigen compact_eigen_from_pairs(Index dim, const MatrixXd& vectors,
                                      const VectorXd& eigenvalues,
                                      RankPolicy policy);

/// Moore-Penrose pseudoinverse applied to a vector: U diag(1/lambda) U^T v.
VectorXd pinv_apply(const CompactEigen& eig, const VectorXd& v);

/// (F + lambda I)^{-1} v, exact on all of R^d: the kernel complement is
/// scaled by 1/lambda.
VectorXd ridge_apply(const CompactEigen& eig, double lambda,
                     const VectorXd& v);

/// Smallest nonzero eigenvalue. Raises ZeroRankError for the zero operator.
double lambda_min_plus(const CompactEigen& eig);

}  // namespace sketchif

#endif  // SKETCHIF_COMPACT_EIGEN_HPP
