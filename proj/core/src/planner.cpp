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

#include "sketchif/planner.hpp"

#include <cmath>
#include <limits>

namespace sketchif {

namespace {

void check_eps_delta(double epsilon, double delta) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw OutOfRangeParamError("planner: epsilon must lie in (0, 1)");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw OutOfRangeParamError("planner: delta must lie in (0, 1)");
  }
}

void check_constant(double c) {
  if (!(c > 0.0)) {
    throw OutOfRangeParamError("planner: constant C must be positive");
  }
}

Index ceil_to_index(double x) {
  return static_cast<Index>(std::ceil(x - 1e-12));
}

}  // namespace

double effective_dim(const CompactEigen& eig, double lambda) {
  if (!(lambda > 0.0)) {
    throw NonPositiveLambdaError("effective_dim: lambda must be positive");
  }
  double sum = 0.0;
  for (Index i = 0; i < eig.rank(); ++i) {
    sum += eig.lambdas()(i) / (eig.lambdas()(i) + lambda);
  }
  return sum;
}

PlannerReport plan_sketch_size(const CompactEigen& eig, double lambda,
                               double epsilon, double delta, double c) {
  check_eps_delta(epsilon, delta);
  check_constant(c);
  if (lambda < 0.0) {
    throw OutOfRangeParamError("plan_sketch_size: negative lambda");
  }

  PlannerReport report;
  report.lambda = lambda;
  report.rank = eig.rank();
  report.dim = eig.dim();
  report.epsilon = epsilon;
  report.delta = delta;
  report.calibration_c = c;

  if (lambda == 0.0) {
    // No multiplicative guarantee below the rank; the injectivity
    // threshold is the recommendation.
    report.d_lambda = static_cast<double>(eig.rank());
    report.m_recommended = eig.rank();
    report.capped = false;
    report.note =
        "unregularized: sketch must be injective on range(F), m = rank";
    return report;
  }

  report.d_lambda = effective_dim(eig, lambda);
  const double raw = c * (report.d_lambda + std::log(1.0 / delta)) /
                     (epsilon * epsilon);
  const Index m_raw = std::max<Index>(Index{1}, ceil_to_index(raw));
  if (m_raw >= eig.dim()) {
    report.m_recommended = eig.dim();
    report.capped = true;
  } else {
    report.m_recommended = m_raw;
    report.capped = false;
  }
  return report;
}

FactorizedPlan plan_factorized(const CompactEigen& eig_a,
                               const CompactEigen& eig_e, double lambda,
                               double epsilon, double delta, double c) {
  check_eps_delta(epsilon, delta);
  check_constant(c);
  if (!(lambda > 0.0)) {
    throw OutOfRangeParamError("plan_factorized: lambda must be positive");
  }
  const double norm_a = eig_a.lambda_max();
  const double norm_e = eig_e.lambda_max();
  if (lambda > norm_a * norm_e) {
    throw LambdaTooLargeError(
        "plan_factorized: lambda exceeds ||A||_2 ||E||_2");
  }

  FactorizedPlan plan;
  plan.lambda = lambda;
  plan.lambda_a = lambda / norm_a;
  plan.lambda_e = lambda / norm_e;
  plan.d_a_eff = effective_dim(eig_a, plan.lambda_e);
  plan.d_e_eff = effective_dim(eig_e, plan.lambda_a);
  plan.epsilon = epsilon;
  plan.delta = delta;
  plan.calibration_c = c;

  const double eps2 = epsilon * epsilon;
  const Index raw_a = std::max<Index>(
      Index{1}, ceil_to_index(c * (plan.d_a_eff + std::log(1.0 / delta)) /
                              eps2));
  const Index raw_e = std::max<Index>(
      Index{1}, ceil_to_index(c * (plan.d_e_eff + std::log(1.0 / delta)) /
                              eps2));
  plan.capped_a = raw_a >= eig_a.dim();
  plan.capped_e = raw_e >= eig_e.dim();
  plan.m_a = plan.capped_a ? eig_a.dim() : raw_a;
  plan.m_e = plan.capped_e ? eig_e.dim() : raw_e;
  plan.m_total = plan.m_a * plan.m_e;
  return plan;
}

LeakageBounds leakage_bounds_values(double lambda_min_plus, double lambda_max,
                                    double lambda, double epsilon,
                                    double norm_g, double norm_gperp) {
  if (norm_g < 0.0 || norm_gperp < 0.0) {
    throw OutOfRangeParamError("leakage_bounds: negative norm");
  }
  if (!(lambda > 0.0)) {
    throw NonPositiveLambdaError(
        "leakage_bounds: regularized branch needs lambda > 0");
  }
  LeakageBounds bounds;
  const double product = epsilon * norm_g * norm_gperp;
  bounds.unregularized =
      lambda_min_plus > 0.0
          ? product / lambda_min_plus
          : (product == 0.0 ? 0.0
                            : std::numeric_limits<double>::infinity());
  bounds.regularized =
      product * (1.0 / lambda + 2.0 * lambda_max / (lambda * lambda));
  return bounds;
}

LeakageBounds leakage_bounds(const CompactEigen& eig, double lambda,
                             double epsilon, double norm_g,
                             double norm_gperp) {
  const double lmin = eig.rank() > 0 ? lambda_min_plus(eig) : 0.0;
  return leakage_bounds_values(lmin, eig.lambda_max(), lambda, epsilon,
                               norm_g, norm_gperp);
}

LeakagePlan plan_leakage_sketch_size(Index rank, Index k, Index k_prime,
                                     double epsilon, double delta, double c) {
  check_eps_delta(epsilon, delta);
  check_constant(c);
  if (k < 1) {
    throw OutOfRangeParamError("plan_leakage_sketch_size: k must be >= 1");
  }
  if (k_prime < 0 || k_prime > k) {
    throw OutOfRangeParamError(
        "plan_leakage_sketch_size: need 0 <= k' <= k");
  }
  if (rank < 0) {
    throw OutOfRangeParamError("plan_leakage_sketch_size: negative rank");
  }

  LeakagePlan plan;
  plan.union_complexity = std::log(static_cast<double>(k) / delta);
  plan.subspace_complexity =
      static_cast<double>(k_prime) + std::log(1.0 / delta);
  const double min_term =
      std::min(plan.union_complexity, plan.subspace_complexity);
  plan.regime = plan.union_complexity <= plan.subspace_complexity
                    ? LeakageRegime::kUnion
                    : LeakageRegime::kSubspace;
  plan.m = std::max<Index>(
      Index{1}, ceil_to_index(c * (static_cast<double>(rank) + min_term) /
                              (epsilon * epsilon)));
  return plan;
}

}  // namespace sketchif
