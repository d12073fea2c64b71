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

#ifndef SKETCHIF_INFLUENCE_HPP
#define SKETCHIF_INFLUENCE_HPP

#include <optional>

#include "sketchif/sketch.hpp"

namespace sketchif {

/// Exact influence score g^T (F + lambda I)^{-1} g'; lambda = 0 uses the
/// pseudoinverse. Symmetric in (g, g').
double tau_exact(const CurvatureOperator& f, double lambda, const VectorXd& g,
                 const VectorXd& g_prime);

/// Overload on a bare eigendecomposition (dense curvature).
double tau_exact(const CompactEigen& eig, double lambda, const VectorXd& g,
                 const VectorXd& g_prime);

/// Sketched solver for a fixed (sketch, curvature) pairing. The sketched
/// curvature P F P^T is eigendecomposed once, through its thin Gram factor
/// P U Lambda^{1/2} (per factor in the Kronecker path), and reused across
/// every score, lambda and gradient pair.
class SketchedInfluence {
 public:
  SketchedInfluence(const RealizedSketch& sk, const CurvatureOperator& f);

  Index sketch_dim() const { return sk_->m(); }

  /// P g.
  VectorXd project(const VectorXd& g) const { return sk_->apply(g); }

  /// (Pg)^T (P F P^T + lambda I)^{-1} (Pg'); lambda = 0 uses the sketched
  /// pseudoinverse under the rank policy rescaled to the sketched spectrum.
  double tau(double lambda, const VectorXd& g, const VectorXd& g_prime) const;

  /// Same score from already-projected vectors w = Pg, w' = Pg'.
  double tau_projected(double lambda, const VectorXd& w,
                       const VectorXd& w_prime) const;

  /// (P F P^T + lambda I)^{-1} w (or the pseudoinverse at lambda = 0).
  VectorXd solve_projected(double lambda, const VectorXd& w) const;

  /// Eigendecomposition of the sketched curvature (dense sketch path).
  const CompactEigen& sketched_eig() const;

 private:
  const RealizedSketch* sk_;
  std::optional<CompactEigen> dense_eig_;    // of P F P^T
  std::optional<CompactEigen> factor_eig_a_; // of P_A A P_A^T
  std::optional<CompactEigen> factor_eig_e_; // of P_E E P_E^T
};

/// One-shot sketched influence score.
double tau_sketched(const RealizedSketch& sk, const CurvatureOperator& f,
                    double lambda, const VectorXd& g, const VectorXd& g_prime);

/// Pairwise influence scores, train rows x test rows. The sketched path
/// projects every gradient once and reuses one sketched eigendecomposition.
MatrixXd influence_gram(const MatrixXd& train_grads,
                        const MatrixXd& test_grads,
                        const CurvatureOperator& f, double lambda,
                        const RealizedSketch* sk = nullptr);

/// Normalized sketched-influence error
///   |tau~ - tau| / sqrt(tau_0(g,g) tau_0(g',g')),
/// evaluated on the range(F)-projections of g and g'. Empty when either
/// self-norm is below 1e-14.
std::optional<double> normalized_error(const CurvatureOperator& f,
                                       const SketchedInfluence& sketched,
                                       double lambda, const VectorXd& g,
                                       const VectorXd& g_prime);

/// Scored pair with provenance.
struct InfluenceReport {
  double tau_exact = 0.0;
  std::optional<double> tau_sketched;
  std::optional<double> normalized_error;
  double self_norm_g = 0.0;        // tau_0(g, g)
  double self_norm_g_prime = 0.0;  // tau_0(g', g')
  std::uint64_t seed = 0;
  Index m = 0;
};

InfluenceReport influence_report(const CurvatureOperator& f, double lambda,
                                 const VectorXd& g, const VectorXd& g_prime,
                                 const RealizedSketch* sk = nullptr);

}  // namespace sketchif

#endif  // SKETCHIF_INFLUENCE_HPP
