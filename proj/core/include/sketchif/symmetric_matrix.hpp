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

#ifndef SKETCHIF_SYMMETRIC_MATRIX_HPP
#define SKETCHIF_SYMMETRIC_MATRIX_HPP

#include <Eigen/Dense>
#include <utility>

#include "sketchif/errors.hpp"

namespace sketchif {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Dense real symmetric matrix. Entries are symmetrized exactly on
/// construction ((M + M^T)/2) and checked finite.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(const MatrixXd& m) {
    if (m.rows() != m.cols()) {
      throw DimMismatchError("SymmetricMatrix: input is not square");
    }
    if (!m.allFinite()) {
      throw NonFiniteError("SymmetricMatrix: non-finite entry");
    }
    entries_ = 0.5 * (m + m.transpose());
  }

  static SymmetricMatrix identity(Index d) {
    return SymmetricMatrix(MatrixXd::Identity(d, d));
  }

  static SymmetricMatrix diagonal(const VectorXd& diag) {
    return SymmetricMatrix(MatrixXd(diag.asDiagonal()));
  }

  static SymmetricMatrix zero(Index d) {
    return SymmetricMatrix(MatrixXd::Zero(d, d));
  }

  Index dim() const { return entries_.rows(); }
  const MatrixXd& entries() const { return entries_; }
  double operator()(Index i, Index j) const { return entries_(i, j); }

  VectorXd apply(const VectorXd& v) const {
    if (v.size() != dim()) {
      throw DimMismatchError("SymmetricMatrix::apply: dimension mismatch");
    }
    return entries_ * v;
  }

 private:
  MatrixXd entries_;
};

}  // namespace sketchif

#endif  // SKETCHIF_SYMMETRIC_MATRIX_HPP
