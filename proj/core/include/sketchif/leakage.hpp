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

#ifndef SKETCHIF_LEAKAGE_HPP
#define SKETCHIF_LEAKAGE_HPP

#include "sketchif/influence.hpp"
#include "sketchif/planner.hpp"

namespace sketchif {

/// Orthogonal split of a test gradient into range(F) and ker(F) parts.
struct RangeKernelSplit {
  VectorXd g_par;
  VectorXd g_perp;
};

/// g' = g'_par + g'_perp with g'_par = U U^T g' in range(F).
RangeKernelSplit decompose(const CompactEigen& eig, const VectorXd& g_prime);
RangeKernelSplit decompose(const CurvatureOperator& f,
                           const VectorXd& g_prime);

/// Factor-level split of a rank-one test gradient a' kron e', plus the
/// assembled kernel component
///   g'_perp = a'_par kron e'_perp + a'_perp kron e'_par
///             + a'_perp kron e'_perp.
struct FactorizedSplit {
  VectorXd a_par, a_perp;
  VectorXd e_par, e_perp;
  VectorXd g_perp;
};

FactorizedSplit decompose_factorized(const CompactEigen& eig_a,
                                     const CompactEigen& eig_e,
                                     const VectorXd& a_prime,
                                     const VectorXd& e_prime);

/// Sketch-induced leakage score tau~_lambda(g, g_perp) together with the
/// exact counterpart (which is zero up to roundoff).
struct LeakageTerm {
  double sketched = 0.0;
  double exact = 0.0;  // |exact| stays at roundoff scale
};

/// Inputs are re-projected internally: g onto range(F), g_perp onto
/// ker(F). Raises NumericalBreakdownError if the exact term is not zero at
/// roundoff scale.
LeakageTerm leakage_term(const SketchedInfluence& sketched,
                         const CurvatureOperator& f, double lambda,
                         const VectorXd& g, const VectorXd& g_perp);

LeakageTerm leakage_term(const RealizedSketch& sk, const CurvatureOperator& f,
                         double lambda, const VectorXd& g,
                         const VectorXd& g_perp);

/// Triangle split of the sketched-influence error for a general g':
/// in-range component, leakage component, and the actual total error.
struct ErrorSplit {
  double in_range_error = 0.0;
  double leakage = 0.0;
  double total = 0.0;
};

ErrorSplit total_error_split(const SketchedInfluence& sketched,
                             const CurvatureOperator& f, double lambda,
                             const VectorXd& g, const VectorXd& g_prime);

/// Per-test-gradient leakage record.
struct LeakageReport {
  double norm_g_par = 0.0;
  double norm_g_perp = 0.0;
  double tau_exact_perp = 0.0;
  double leakage_value = 0.0;
  double bound_unreg = 0.0;
  double bound_reg = 0.0;
  double lambda = 0.0;
  Index m = 0;
  std::uint64_t seed = 0;
};

LeakageReport leakage_report(const SketchedInfluence& sketched,
                             const CurvatureOperator& f, double lambda,
                             double epsilon, const VectorXd& g,
                             const VectorXd& g_prime);

}  // namespace sketchif

#endif  // SKETCHIF_LEAKAGE_HPP
