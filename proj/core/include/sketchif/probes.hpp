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

#ifndef SKETCHIF_PROBES_HPP
#define SKETCHIF_PROBES_HPP

#include <map>
#include <string>
#include <vector>

#include "sketchif/influence.hpp"
#include "sketchif/leakage.hpp"
#include "sketchif/planner.hpp"
#include "sketchif/synthetic.hpp"

namespace sketchif {

// Seeded, repeatable probes: each statement of the analysis runs as either
// a deterministic per-seed implication (pass means every seed conforms) or
// a Monte-Carlo frequency estimate under the failure-rate protocol
// (empirical failure <= delta + 2 sqrt(delta / trials)). Trial seeds are
// derive_key(derive_key(base_seed, probe_id), trial_index).

struct ProbeConfig {
  Index trials = 200;
  std::uint64_t base_seed = 0;
  double epsilon = 0.25;
  double delta = 0.1;
  double lambda = 1.0;
  double calibration_c = kDefaultPlannerConstant;
  Index dim = 64;
  Index rank = 16;
  SketchFamily family = SketchFamily::kGaussian;
  unsigned threads = 0;  // 0: hardware default

  void validate() const;
};

struct TrialRecord {
  std::uint64_t seed = 0;
  double value = 0.0;
};

/// Outcome of one probe. `pass` compares `statistic` against `threshold`
/// in the probe's direction; auxiliary named statistics (and any
/// deterministic side-assertions) land in `aux`.
struct ProbeResult {
  std::string name;
  bool pass = false;
  double statistic = 0.0;
  double threshold = 0.0;
  std::string direction;  // "at_most" or "at_least"
  Index trials = 0;
  std::uint64_t base_seed = 0;
  std::map<std::string, double> aux;
  std::vector<TrialRecord> records;
};

/// Failure-rate acceptance level delta + 2 sqrt(delta / trials).
double failure_rate_threshold(double delta, Index trials);

std::string probe_result_to_json(const ProbeResult& result);
std::string probe_results_to_json(const std::vector<ProbeResult>& results);

/// Exactness dichotomy of unregularized sketched influence: at m = rank a
/// continuous sketch preserves every in-range score; at m = rank - 1 a
/// null direction of PU yields a vanishing sketched self-score.
ProbeResult probe_unregularized_dichotomy(const ProbeConfig& cfg);

/// Ridge-resolvent perturbation: per-seed implication
/// dev2 <= 2 dev1 / (1 - dev1) between the whitened-subspace deviation and
/// the resolvent-difference norm, plus the planned-size failure rate of
/// dev1 <= eps/2.
ProbeResult probe_sandwich(const ProbeConfig& cfg);

/// Worst-case hard instance: frequency of |tau~ - tau| >= eps/32 under the
/// proof's witness choice of y_L.
ProbeResult probe_lower_bound(const HardInstance& inst, double epsilon,
                              Index m, Index trials, std::uint64_t base_seed,
                              unsigned threads = 0);

/// Anti-concentration of the Gaussian sample covariance: frequency of
/// ||S - I|| >= sqrt(k/m)/2, and the Frobenius moment
/// E||S - I||_F^2 = k(k+1)/m within +-15%.
ProbeResult probe_anti_concentration(Index m, Index k, Index trials,
                                     std::uint64_t base_seed,
                                     unsigned threads = 0);

/// Factorized exactness barrier over the four (m_A, m_E) quadrants around
/// (rank(A), rank(E)).
ProbeResult probe_factorized_barrier(const ProbeConfig& cfg);

/// Factorized covariance deviation: deterministic triangle split
/// total <= T1 + T2 + T3 per seed, and the planned-size failure rate of
/// total <= 2 eps + 3 eps^2.
ProbeResult probe_factorized_deviation(const ProbeConfig& cfg);

/// Kronecker cross-term reduction: per-seed implication that the assembled
/// cross-term is bounded by (2 e + 3 e^2) times the split-norm sum, with e
/// the measured maximum factor primitive ratio.
ProbeResult probe_cross_term(const ProbeConfig& cfg);

/// Leakage conformance at planned sketch size: max over k test gradients
/// of |leakage| against the closed-form regularized bound.
ProbeResult probe_leakage(const ProbeConfig& cfg, Index k_test = 32);

/// Median |leakage| decay from m to 4m stays within the m^{-1/2} window
/// [0.35, 0.72].
ProbeResult probe_leakage_decay(const ProbeConfig& cfg);

/// Factorized leakage conformance for rank-one test gradients at factor
/// sizes planned from the factor-level rule.
ProbeResult probe_factorized_leakage(const ProbeConfig& cfg,
                                     Index k_test = 8);

/// Smallest C in {1, 2, 4, 8, 16, 32, 64} for which the sandwich probe
/// passes at planned m on every member of the synthetic power-law corpus
/// (exponents 0.5, 1, 1.5, 2). Raises CalibrationFailedError when none
/// does.
double calibrate_constant(double epsilon, double delta,
                          std::uint64_t base_seed, Index trials = 400,
                          unsigned threads = 0);

/// Curvature corpus used by the calibration run: power-law spectra at
/// dimension `dim` with lambda tuned per member so d_lambda ~= 2.
struct CalibrationMember {
  double exponent = 0.0;
  double lambda = 0.0;
  CompactEigen eig;
};
std::vector<CalibrationMember> calibration_corpus(Index dim,
                                                  std::uint64_t seed);

/// Probe suites surfaced by the CLI.
std::vector<ProbeResult> run_suite(const std::string& suite,
                                   std::uint64_t base_seed,
                                   unsigned threads = 0);
std::vector<std::string> suite_names();

}  // namespace sketchif

#endif  // SKETCHIF_PROBES_HPP
