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

#ifndef SKETCHIF_CURVATURE_HPP
#define SKETCHIF_CURVATURE_HPP

#include <optional>
#include <variant>

#include "sketchif/kronecker.hpp"

namespace sketchif {

/// PSD curvature operator: dense symmetric, or a Kronecker factor pair.
/// The eigendecomposition (factor-wise in the Kronecker case) is computed
/// once at construction and shared by all downstream solves.
class CurvatureOperator {
 public:
  static CurvatureOperator dense(SymmetricMatrix f, RankPolicy policy = {});
  static CurvatureOperator dense(CompactEigen eig);
  static CurvatureOperator factorized(KroneckerPair pair);

  bool is_factorized() const {
    return std::holds_alternative<KroneckerPair>(repr_);
  }
  Index dim() const;
  Index rank() const;
  double lambda_max() const;
  double lambda_min_plus() const;

  /// Dense-path eigendecomposition. Raises FamilyMismatchError on a
  /// factorized operator; use pair() there.
  const CompactEigen& eig() const;

  const KroneckerPair& pair() const;

  /// F v.
  VectorXd apply(const VectorXd& v) const;
  /// (F + lambda I)^{-1} v.
  VectorXd ridge_apply(double lambda, const VectorXd& v) const;
  /// F^dagger v.
  VectorXd pinv_apply(const VectorXd& v) const;
  /// Projection onto range(F).
  VectorXd project_range(const VectorXd& v) const;

  /// tr(F (F + lambda I)^{-1}).
  double effective_dim(double lambda) const;

  /// Dense materialization (cap-guarded for Kronecker curvature).
  SymmetricMatrix to_dense(Index cap = kKronDenseCap) const;

 private:
  explicit CurvatureOperator(CompactEigen eig) : repr_(std::move(eig)) {}
  explicit CurvatureOperator(KroneckerPair pair) : repr_(std::move(pair)) {}

  std::variant<CompactEigen, KroneckerPair> repr_;
  std::optional<SymmetricMatrix> dense_entries_;
};

}  // namespace sketchif

#endif  // SKETCHIF_CURVATURE_HPP
