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

#include "sketchif/leakage.hpp"

#include <cmath>

namespace sketchif {

RangeKernelSplit decompose(const CompactEigen& eig, const VectorXd& g_prime) {
  if (g_prime.size() != eig.dim()) {
    throw DimMismatchError("decompose: dimension mismatch");
  }
  RangeKernelSplit split;
  split.g_par = eig.project_range(g_prime);
  split.g_perp = g_prime - split.g_par;
  return split;
}

RangeKernelSplit decompose(const CurvatureOperator& f,
                           const VectorXd& g_prime) {
  if (g_prime.size() != f.dim()) {
    throw DimMismatchError("decompose: dimension mismatch");
  }
  RangeKernelSplit split;
  split.g_par = f.project_range(g_prime);
  split.g_perp = g_prime - split.g_par;
  return split;
}

FactorizedSplit decompose_factorized(const CompactEigen& eig_a,
                                     const CompactEigen& eig_e,
                                     const VectorXd& a_prime,
                                     const VectorXd& e_prime) {
  if (a_prime.size() != eig_a.dim() || e_prime.size() != eig_e.dim()) {
    throw DimMismatchError("decompose_factorized: dimension mismatch");
  }
  FactorizedSplit split;
  split.a_par = eig_a.project_range(a_prime);
  split.a_perp = a_prime - split.a_par;
  split.e_par = eig_e.project_range(e_prime);
  split.e_perp = e_prime - split.e_par;
  const MatrixXd perp_matrix = split.e_perp * split.a_par.transpose() +
                               split.e_par * split.a_perp.transpose() +
                               split.e_perp * split.a_perp.transpose();
  split.g_perp = vec(perp_matrix);
  return split;
}

LeakageTerm leakage_term(const SketchedInfluence& sketched,
                         const CurvatureOperator& f, double lambda,
                         const VectorXd& g, const VectorXd& g_perp) {
  if (g.size() != f.dim() || g_perp.size() != f.dim()) {
    throw DimMismatchError("leakage_term: dimension mismatch");
  }
  // Floating-point drift in the caller's projections would contaminate the
  // exact-term zero check, so both inputs are re-projected here.
  const VectorXd g_in = f.project_range(g);
  const VectorXd perp = g_perp - f.project_range(g_perp);

  LeakageTerm term;
  term.exact = tau_exact(f, lambda, g_in, perp);
  term.sketched = sketched.tau(lambda, g_in, perp);

  const double lmin = f.rank() > 0 ? f.lambda_min_plus() : 0.0;
  double inv_scale = lambda > 0.0 ? 1.0 / lambda : 0.0;
  if (lmin > 0.0) inv_scale = std::max(inv_scale, 1.0 / lmin);
  const double tol =
      1e-9 * g_in.norm() * perp.norm() * std::max(1.0, inv_scale);
  if (std::abs(term.exact) > tol) {
    throw NumericalBreakdownError(
        "leakage_term: exact influence couples range and kernel");
  }
  return term;
}

LeakageTerm leakage_term(const RealizedSketch& sk, const CurvatureOperator& f,
                         double lambda, const VectorXd& g,
                         const VectorXd& g_perp) {
  const SketchedInfluence sketched(sk, f);
  return leakage_term(sketched, f, lambda, g, g_perp);
}

ErrorSplit total_error_split(const SketchedInfluence& sketched,
                             const CurvatureOperator& f, double lambda,
                             const VectorXd& g, const VectorXd& g_prime) {
  if (g.size() != f.dim() || g_prime.size() != f.dim()) {
    throw DimMismatchError("total_error_split: dimension mismatch");
  }
  const VectorXd g_in = f.project_range(g);
  const RangeKernelSplit split = decompose(f, g_prime);

  ErrorSplit out;
  out.in_range_error =
      std::abs(sketched.tau(lambda, g_in, split.g_par) -
               tau_exact(f, lambda, g_in, split.g_par));
  out.leakage = std::abs(sketched.tau(lambda, g_in, split.g_perp));
  out.total = std::abs(sketched.tau(lambda, g_in, g_prime) -
                       tau_exact(f, lambda, g_in, g_prime));
  if (out.total > out.in_range_error + out.leakage + 1e-9) {
    throw NumericalBreakdownError(
        "total_error_split: triangle inequality violated");
  }
  return out;
}

LeakageReport leakage_report(const SketchedInfluence& sketched,
                             const CurvatureOperator& f, double lambda,
                             double epsilon, const VectorXd& g,
                             const VectorXd& g_prime) {
  const RangeKernelSplit split = decompose(f, g_prime);
  const LeakageTerm term =
      leakage_term(sketched, f, lambda, g, split.g_perp);

  LeakageReport report;
  report.norm_g_par = split.g_par.norm();
  report.norm_g_perp = split.g_perp.norm();
  report.tau_exact_perp = term.exact;
  report.leakage_value = term.sketched;
  const double lmin = f.rank() > 0 ? f.lambda_min_plus() : 0.0;
  const LeakageBounds bounds = leakage_bounds_values(
      lmin, f.lambda_max(), lambda, epsilon,
      f.project_range(g).norm(), report.norm_g_perp);
  report.bound_unreg = bounds.unregularized;
  report.bound_reg = bounds.regularized;
  report.lambda = lambda;
  report.m = sketched.sketch_dim();
  return report;
}

}  // namespace sketchif
