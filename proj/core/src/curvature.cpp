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

#include "sketchif/curvature.hpp"

namespace sketchif {

CurvatureOperator CurvatureOperator::dense(SymmetricMatrix f,
                                           RankPolicy policy) {
  CurvatureOperator op(compact_eig(f, policy));
  op.dense_entries_ = std::move(f);
  return op;
}

CurvatureOperator CurvatureOperator::dense(CompactEigen eig) {
  return CurvatureOperator(std::move(eig));
}

CurvatureOperator CurvatureOperator::factorized(KroneckerPair pair) {
  return CurvatureOperator(std::move(pair));
}

Index CurvatureOperator::dim() const {
  return is_factorized() ? pair().dim() : eig().dim();
}

Index CurvatureOperator::rank() const {
  return is_factorized() ? pair().rank() : eig().rank();
}

double CurvatureOperator::lambda_max() const {
  return is_factorized() ? pair().lambda_max() : eig().lambda_max();
}

double CurvatureOperator::lambda_min_plus() const {
  return is_factorized() ? pair().lambda_min_plus()
                         : sketchif::lambda_min_plus(eig());
}

const CompactEigen& CurvatureOperator::eig() const {
  if (is_factorized()) {
    throw FamilyMismatchError(
        "CurvatureOperator::eig: operator is factorized");
  }
  return std::get<CompactEigen>(repr_);
}

const KroneckerPair& CurvatureOperator::pair() const {
  if (!is_factorized()) {
    throw FamilyMismatchError("CurvatureOperator::pair: operator is dense");
  }
  return std::get<KroneckerPair>(repr_);
}

VectorXd CurvatureOperator::apply(const VectorXd& v) const {
  if (is_factorized()) return pair().apply(v);
  if (dense_entries_) return dense_entries_->apply(v);
  return eig().apply(v);
}

VectorXd CurvatureOperator::ridge_apply(double lambda,
                                        const VectorXd& v) const {
  if (is_factorized()) return pair().ridge_apply(lambda, v);
  return sketchif::ridge_apply(eig(), lambda, v);
}

VectorXd CurvatureOperator::pinv_apply(const VectorXd& v) const {
  if (is_factorized()) return pair().pinv_apply(v);
  return sketchif::pinv_apply(eig(), v);
}

VectorXd CurvatureOperator::project_range(const VectorXd& v) const {
  if (is_factorized()) return pair().project_range(v);
  return eig().project_range(v);
}

double CurvatureOperator::effective_dim(double lambda) const {
  if (!(lambda > 0.0)) {
    throw NonPositiveLambdaError("effective_dim: lambda must be positive");
  }
  double sum = 0.0;
  if (is_factorized()) {
    const VectorXd& alphas = pair().eig_a().lambdas();
    const VectorXd& gammas = pair().eig_e().lambdas();
    for (Index i = 0; i < alphas.size(); ++i) {
      for (Index j = 0; j < gammas.size(); ++j) {
        const double ev = alphas(i) * gammas(j);
        sum += ev / (ev + lambda);
      }
    }
  } else {
    const VectorXd& lam = eig().lambdas();
    for (Index i = 0; i < lam.size(); ++i) {
      sum += lam(i) / (lam(i) + lambda);
    }
  }
  return sum;
}

SymmetricMatrix CurvatureOperator::to_dense(Index cap) const {
  if (is_factorized()) return kron_dense(pair(), cap);
  if (dense_entries_) return *dense_entries_;
  return SymmetricMatrix(eig().reconstruct());
}

}  // namespace sketchif
