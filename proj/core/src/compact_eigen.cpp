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

#include "sketchif/compact_eigen.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

namespace sketchif {

namespace {

// First nonzero entry of each column made positive.
void normalize_column_signs(MatrixXd& u) {
  for (Index j = 0; j < u.cols(); ++j) {
    for (Index i = 0; i < u.rows(); ++i) {
      if (u(i, j) != 0.0) {
        if (u(i, j) < 0.0) u.col(j) = -u.col(j);
        break;
      }
    }
  }
}

}  // namespace

VectorXd CompactEigen::apply(const VectorXd& v) const {
  if (v.size() != dim_) {
    throw DimMismatchError("CompactEigen::apply: dimension mismatch");
  }
  if (rank() == 0) return VectorXd::Zero(dim_);
  return basis_ * (lambdas_.asDiagonal() * (basis_.transpose() * v));
}

VectorXd CompactEigen::project_range(const VectorXd& v) const {
  if (v.size() != dim_) {
    throw DimMismatchError("CompactEigen::project_range: dimension mismatch");
  }
  if (rank() == 0) return VectorXd::Zero(dim_);
  return basis_ * (basis_.transpose() * v);
}

MatrixXd CompactEigen::reconstruct() const {
  if (rank() == 0) return MatrixXd::Zero(dim_, dim_);
  return basis_ * lambdas_.asDiagonal() * basis_.transpose();
}

CompactEigen compact_eigen_from_pairs(Index dim, const MatrixXd& vectors,
                                      const VectorXd& eigenvalues,
                                      RankPolicy policy) {
  policy.validate();
  if (vectors.rows() != dim || vectors.cols() != eigenvalues.size()) {
    throw DimMismatchError("compact_eigen_from_pairs: shape mismatch");
  }
  if (!eigenvalues.allFinite() || !vectors.allFinite()) {
    throw NonFiniteError("compact_eigen_from_pairs: non-finite eigenpair");
  }

  const double lambda_max =
      eigenvalues.size() > 0 ? eigenvalues.maxCoeff() : 0.0;
  const double cutoff = policy.cutoff(lambda_max);

  const double min_eig =
      eigenvalues.size() > 0 ? eigenvalues.minCoeff() : 0.0;
  if (min_eig < -cutoff) {
    throw NotPsdError("compact_eig: eigenvalue " + std::to_string(min_eig) +
                      " below -cutoff " + std::to_string(-cutoff));
  }

  std::vector<Index> keep;
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    if (eigenvalues(i) > cutoff) keep.push_back(i);
  }
  std::stable_sort(keep.begin(), keep.end(), [&](Index a, Index b) {
    return eigenvalues(a) > eigenvalues(b);
  });

  const Index r = static_cast<Index>(keep.size());
  MatrixXd u(dim, r);
  VectorXd lam(r);
  for (Index j = 0; j < r; ++j) {
    u.col(j) = vectors.col(keep[static_cast<std::size_t>(j)]);
    lam(j) = eigenvalues(keep[static_cast<std::size_t>(j)]);
  }
  normalize_column_signs(u);
  return CompactEigen(dim, std::move(u), std::move(lam), policy);
}

CompactEigen compact_eig(const SymmetricMatrix& f, RankPolicy policy) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(f.entries());
  if (solver.info() != Eigen::Success) {
    throw NumericalBreakdownError("compact_eig: eigensolver failed");
  }
  return compact_eigen_from_pairs(f.dim(), solver.eigenvectors(),
                                  solver.eigenvalues(), policy);
}

VectorXd pinv_apply(const CompactEigen& eig, const VectorXd& v) {
  if (v.size() != eig.dim()) {
    throw DimMismatchError("pinv_apply: dimension mismatch");
  }
  if (eig.rank() == 0) return VectorXd::Zero(eig.dim());
  const VectorXd coeffs = eig.basis().transpose() * v;
  return eig.basis() * coeffs.cwiseQuotient(eig.lambdas());
}

VectorXd ridge_apply(const CompactEigen& eig, double lambda,
                     const VectorXd& v) {
  if (v.size() != eig.dim()) {
    throw DimMismatchError("ridge_apply: dimension mismatch");
  }
  if (!(lambda > 0.0)) {
    throw NonPositiveLambdaError("ridge_apply: lambda must be positive");
  }
  if (eig.rank() == 0) return v / lambda;
  const VectorXd coeffs = eig.basis().transpose() * v;
  const VectorXd range_part =
      eig.basis() *
      (coeffs.array() / (eig.lambdas().array() + lambda)).matrix();
  const VectorXd kernel_part = (v - eig.basis() * coeffs) / lambda;
  return range_part + kernel_part;
}

double lambda_min_plus(const CompactEigen& eig) {
  if (eig.rank() == 0) {
    throw ZeroRankError("lambda_min_plus: operator has rank zero");
  }
  return eig.lambdas()(eig.rank() - 1);
}

}  // namespace sketchif
