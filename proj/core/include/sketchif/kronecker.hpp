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

#ifndef SKETCHIF_KRONECKER_HPP
#define SKETCHIF_KRONECKER_HPP

#include <Eigen/Dense>

#include "sketchif/compact_eigen.hpp"
#include "sketchif/symmetric_matrix.hpp"

namespace sketchif {

inline constexpr Index kKronDenseCap = 4096;

// Kronecker conventions used throughout:
//   - kron(X, Y) is the standard product with block (a, a') equal to
//     X(a, a') * Y, so row index (a, e) flattens to a * rows(Y) + e.
//   - A vector g in R^{dA*dE} corresponds to the dE x dA matrix G with
//     g = vec(G), vec stacking columns of G. Then
//     (X kron Y) vec(G) = vec(Y G X^T).

/// Dense Kronecker product of two matrices.
MatrixXd kron(const MatrixXd& x, const MatrixXd& y);

/// Column-stacking vec of a matrix.
VectorXd vec(const MatrixXd& g);

/// Inverse of vec: view a length rows*cols vector as a rows x cols matrix.
MatrixXd unvec(const VectorXd& v, Index rows, Index cols);

/// PSD curvature in factorized form, F = A kron E. Factor
/// eigendecompositions are computed once on construction.
class KroneckerPair {
 public:
  KroneckerPair(SymmetricMatrix factor_a, SymmetricMatrix factor_e,
                RankPolicy policy = {});

  /// Wraps precomputed factor eigendecompositions (e.g. from a cache file).
  /// The factors are represented by their kept eigenpairs.
  KroneckerPair(CompactEigen eig_a, CompactEigen eig_e);

  Index dim_a() const { return eig_a_.dim(); }
  Index dim_e() const { return eig_e_.dim(); }
  Index dim() const { return dim_a() * dim_e(); }
  Index rank() const { return eig_a_.rank() * eig_e_.rank(); }

  /// Factor matrices. Reconstructed from the eigenpairs when the pair was
  /// built from a cache.
  const SymmetricMatrix& factor_a() const { return factor_a_; }
  const SymmetricMatrix& factor_e() const { return factor_e_; }

  const CompactEigen& eig_a() const { return eig_a_; }
  const CompactEigen& eig_e() const { return eig_e_; }

  /// Largest eigenvalue of A kron E.
  double lambda_max() const {
    return eig_a_.lambda_max() * eig_e_.lambda_max();
  }

  /// Smallest nonzero eigenvalue of A kron E.
  double lambda_min_plus() const;

  /// (A kron E) g without materializing the product.
  VectorXd apply(const VectorXd& g) const;

  /// (A kron E + lambda I)^{-1} g via the factor eigenbases.
  VectorXd ridge_apply(double lambda, const VectorXd& g) const;

  /// (A kron E)^dagger g = (A^dagger kron E^dagger) g.
  VectorXd pinv_apply(const VectorXd& g) const;

  /// Projection of g onto range(A kron E) = range(A) kron range(E).
  VectorXd project_range(const VectorXd& g) const;

 private:
  SymmetricMatrix factor_a_;
  SymmetricMatrix factor_e_;
  CompactEigen eig_a_;
  CompactEigen eig_e_;
};

/// Dense A kron E, for dims up to `cap`. Raises CapExceededError above it.
SymmetricMatrix kron_dense(const KroneckerPair& pair,
                           Index cap = kKronDenseCap);

// Solves against X kron Y given only the factor eigendecompositions; the
// operators act on vec()-ed dA*dE (or mA*mE) vectors. Modes touching a
// kernel factor direction carry eigenvalue zero.

/// (X kron Y + lambda I)^{-1} g.
VectorXd kron_ridge_apply(const CompactEigen& eig_x, const CompactEigen& eig_y,
                          double lambda, const VectorXd& g);

/// (X kron Y)^dagger g = (X^dagger kron Y^dagger) g.
VectorXd kron_pinv_apply(const CompactEigen& eig_x, const CompactEigen& eig_y,
                         const VectorXd& g);

/// Projection onto range(X) kron range(Y).
VectorXd kron_project_range(const CompactEigen& eig_x,
                            const CompactEigen& eig_y, const VectorXd& g);

}  // namespace sketchif

#endif  // SKETCHIF_KRONECKER_HPP
