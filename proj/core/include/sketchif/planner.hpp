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

#ifndef SKETCHIF_PLANNER_HPP
#define SKETCHIF_PLANNER_HPP

#include <string>

#include "sketchif/compact_eigen.hpp"
#include "sketchif/curvature.hpp"

namespace sketchif {

/// Default multiplicative constant in the sketch-size rules. The
/// verification suite re-estimates it empirically (calibrate_constant).
inline constexpr double kDefaultPlannerConstant = 16.0;

/// Sketch-size recommendation for regularized influence.
struct PlannerReport {
  double lambda = 0.0;
  double d_lambda = 0.0;
  Index rank = 0;
  Index dim = 0;
  Index m_recommended = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  double calibration_c = kDefaultPlannerConstant;
  bool capped = false;  // true when m hit the ambient dimension
  std::string note;
};

/// Factor-level sketch plan for Kronecker curvature.
struct FactorizedPlan {
  double lambda = 0.0;
  double lambda_a = 0.0;  // lambda / ||A||_2
  double lambda_e = 0.0;  // lambda / ||E||_2
  double d_a_eff = 0.0;   // d_{lambda_E}(A)
  double d_e_eff = 0.0;   // d_{lambda_A}(E)
  Index m_a = 0;
  Index m_e = 0;
  Index m_total = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  double calibration_c = kDefaultPlannerConstant;
  bool capped_a = false;
  bool capped_e = false;
};

enum class LeakageRegime { kUnion, kSubspace };

struct LeakagePlan {
  Index m = 0;
  LeakageRegime regime = LeakageRegime::kUnion;
  double union_complexity = 0.0;     // log(k / delta)
  double subspace_complexity = 0.0;  // k' + log(1 / delta)
};

/// Effective dimension d_lambda = sum_i lambda_i / (lambda_i + lambda).
double effective_dim(const CompactEigen& eig, double lambda);

/// m = min(d, ceil(C (d_lambda + ln(1/delta)) / eps^2)); lambda = 0 returns
/// the rank barrier m = r.
PlannerReport plan_sketch_size(const CompactEigen& eig, double lambda,
                               double epsilon, double delta,
                               double c = kDefaultPlannerConstant);

/// Factor sizes from the rescaled regularization levels
/// lambda_E = lambda/||E||_2 (for the A factor) and lambda_A = lambda/||A||_2
/// (for the E factor). Requires lambda <= ||A||_2 ||E||_2.
FactorizedPlan plan_factorized(const CompactEigen& eig_a,
                               const CompactEigen& eig_e, double lambda,
                               double epsilon, double delta,
                               double c = kDefaultPlannerConstant);

/// Closed-form leakage bounds for a kernel component of norm `norm_gperp`:
/// unregularized eps ||g|| ||g'_perp|| / lambda_min_plus (infinite at rank
/// zero) and regularized eps ||g|| ||g'_perp|| (1/lambda + 2 ||F||/lambda^2).
struct LeakageBounds {
  double unregularized = 0.0;
  double regularized = 0.0;
};
LeakageBounds leakage_bounds(const CompactEigen& eig, double lambda,
                             double epsilon, double norm_g,
                             double norm_gperp);
LeakageBounds leakage_bounds_values(double lambda_min_plus, double lambda_max,
                                    double lambda, double epsilon,
                                    double norm_g, double norm_gperp);

/// m = ceil(C (r + min(ln(k/delta), k' + ln(1/delta))) / eps^2), reporting
/// which of the two regimes attains the minimum.
LeakagePlan plan_leakage_sketch_size(Index rank, Index k, Index k_prime,
                                     double epsilon, double delta,
                                     double c = kDefaultPlannerConstant);

}  // namespace sketchif

#endif  // SKETCHIF_PLANNER_HPP
