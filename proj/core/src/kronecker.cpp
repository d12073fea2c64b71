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

#include "sketchif/kronecker.hpp"

#include <string>
#include <utility>

namespace sketchif {

MatrixXd kron(const MatrixXd& x, const MatrixXd& y) {
  MatrixXd out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) {
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) =
          x(i, j) * y;
    }
  }
  return out;
}

VectorXd vec(const MatrixXd& g) {
  return Eigen::Map<const VectorXd>(g.data(), g.size());
}

MatrixXd unvec(const VectorXd& v, Index rows, Index cols) {
  if (v.size() != rows * cols) {
    throw DimMismatchError("unvec: size " + std::to_string(v.size()) +
                           " != " + std::to_string(rows * cols));
  }
  return Eigen::Map<const MatrixXd>(v.data(), rows, cols);
}

KroneckerPair::KroneckerPair(SymmetricMatrix factor_a,
                             SymmetricMatrix factor_e, RankPolicy policy)
    : factor_a_(std::move(factor_a)),
      factor_e_(std::move(factor_e)),
      eig_a_(compact_eig(factor_a_, policy)),
      eig_e_(compact_eig(factor_e_, policy)) {}

KroneckerPair::KroneckerPair(CompactEigen eig_a, CompactEigen eig_e)
    : factor_a_(SymmetricMatrix(eig_a.reconstruct())),
      factor_e_(SymmetricMatrix(eig_e.reconstruct())),
      eig_a_(std::move(eig_a)),
      eig_e_(std::move(eig_e)) {}

double KroneckerPair::lambda_min_plus() const {
  if (rank() == 0) {
    throw ZeroRankError("KroneckerPair::lambda_min_plus: rank zero");
  }
  return sketchif::lambda_min_plus(eig_a_) * sketchif::lambda_min_plus(eig_e_);
}

VectorXd KroneckerPair::apply(const VectorXd& g) const {
  if (g.size() != dim()) {
    throw DimMismatchError("KroneckerPair::apply: dimension mismatch");
  }
  const MatrixXd gm = unvec(g, dim_e(), dim_a());
  // (A kron E) vec(G) = vec(E G A^T); A and E are symmetric.
  return vec(factor_e_.entries() * gm * factor_a_.entries());
}

VectorXd KroneckerPair::ridge_apply(double lambda, const VectorXd& g) const {
  return kron_ridge_apply(eig_a_, eig_e_, lambda, g);
}

VectorXd KroneckerPair::pinv_apply(const VectorXd& g) const {
  return kron_pinv_apply(eig_a_, eig_e_, g);
}

VectorXd KroneckerPair::project_range(const VectorXd& g) const {
  return kron_project_range(eig_a_, eig_e_, g);
}

VectorXd kron_ridge_apply(const CompactEigen& eig_x, const CompactEigen& eig_y,
                          double lambda, const VectorXd& g) {
  if (g.size() != eig_x.dim() * eig_y.dim()) {
    throw DimMismatchError("kron_ridge_apply: dimension mismatch");
  }
  if (!(lambda > 0.0)) {
    throw NonPositiveLambdaError("kron_ridge_apply: lambda <= 0");
  }
  const MatrixXd gm = unvec(g, eig_y.dim(), eig_x.dim());
  // Every mode involving a kernel factor direction has eigenvalue zero, so
  // (X kron Y + lambda I)^{-1} acts there as 1/lambda; only the range x
  // range block is corrected away from 1/lambda.
  const MatrixXd& ux = eig_x.basis();
  const MatrixXd& uy = eig_y.basis();
  MatrixXd coeff = uy.transpose() * gm * ux;  // rY x rX
  for (Index j = 0; j < coeff.cols(); ++j) {
    for (Index i = 0; i < coeff.rows(); ++i) {
      const double ev = eig_x.lambdas()(j) * eig_y.lambdas()(i);
      coeff(i, j) *= 1.0 / (ev + lambda) - 1.0 / lambda;
    }
  }
  const MatrixXd out = gm / lambda + uy * coeff * ux.transpose();
  return vec(out);
}

VectorXd kron_pinv_apply(const CompactEigen& eig_x, const CompactEigen& eig_y,
                         const VectorXd& g) {
  if (g.size() != eig_x.dim() * eig_y.dim()) {
    throw DimMismatchError("kron_pinv_apply: dimension mismatch");
  }
  const MatrixXd gm = unvec(g, eig_y.dim(), eig_x.dim());
  const MatrixXd& ux = eig_x.basis();
  const MatrixXd& uy = eig_y.basis();
  MatrixXd coeff = uy.transpose() * gm * ux;
  for (Index j = 0; j < coeff.cols(); ++j) {
    for (Index i = 0; i < coeff.rows(); ++i) {
      coeff(i, j) /= eig_x.lambdas()(j) * eig_y.lambdas()(i);
    }
  }
  MatrixXd out = MatrixXd::Zero(eig_y.dim(), eig_x.dim());
  if (coeff.size() > 0) out = uy * coeff * ux.transpose();
  return vec(out);
}

VectorXd kron_project_range(const CompactEigen& eig_x,
                            const CompactEigen& eig_y, const VectorXd& g) {
  if (g.size() != eig_x.dim() * eig_y.dim()) {
    throw DimMismatchError("kron_project_range: dimension mismatch");
  }
  const MatrixXd gm = unvec(g, eig_y.dim(), eig_x.dim());
  const MatrixXd& ux = eig_x.basis();
  const MatrixXd& uy = eig_y.basis();
  MatrixXd out = MatrixXd::Zero(eig_y.dim(), eig_x.dim());
  if (eig_x.rank() > 0 && eig_y.rank() > 0) {
    out = uy * (uy.transpose() * gm * ux) * ux.transpose();
  }
  return vec(out);
}

SymmetricMatrix kron_dense(const KroneckerPair& pair, Index cap) {
  if (pair.dim() > cap) {
    throw CapExceededError("kron_dense: dim " + std::to_string(pair.dim()) +
                           " exceeds cap " + std::to_string(cap));
  }
  return SymmetricMatrix(
      kron(pair.factor_a().entries(), pair.factor_e().entries()));
}

}  // namespace sketchif
