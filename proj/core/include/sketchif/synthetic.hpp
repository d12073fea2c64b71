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

#ifndef SKETCHIF_SYNTHETIC_HPP
#define SKETCHIF_SYNTHETIC_HPP

#include <cstdint>

#include "sketchif/curvature.hpp"

namespace sketchif {

/// Spectrum shapes for synthetic gradient corpora.
struct SpectrumSpec {
  enum class Kind { kPowerLaw, kFlat, kHard };
  Kind kind = Kind::kPowerLaw;
  double exponent = 1.0;  // power law: lambda_j = j^-exponent
  // Hard instance parameters.
  Index k = 0;
  Index r = 0;
  double eta = 0.0;
  double lambda = 1.0;

  static SpectrumSpec powerlaw(double exponent);
  static SpectrumSpec flat();
  static SpectrumSpec hard(Index k, Index r, double eta, double lambda = 1.0);
};

/// Diagonal curvature diag(lambda 1_k, eta lambda 1_{r-k}, 0); the
/// worst-case family for regularized sketching. Carries its closed forms.
struct HardInstance {
  Index k = 0;
  Index r = 0;
  Index d = 0;
  double lambda = 0.0;
  double eta = 0.0;

  HardInstance(Index k, Index r, Index d, double lambda, double eta);

  VectorXd spectrum() const;
  SymmetricMatrix matrix() const;

  /// d_lambda(F) = k/2 + eta (r - k) / (1 + eta), exactly.
  double effective_dim_closed_form() const;

  /// g = F^{1/2} (y_L, 0, 0) for a unit y_L in the leading block; then
  /// tau_lambda(g, g) = 1/2 and tau_0(g, g) = 1.
  VectorXd gradient_from_leading(const VectorXd& y_l) const;
};

/// Per-coordinate standard deviations realizing the requested Fisher
/// spectrum shape at dimension d.
VectorXd spectrum_scales(const SpectrumSpec& spec, Index d);

/// n x d gradient corpus whose empirical Fisher (1/n) G^T G matches the
/// spectrum shape. The hard shape is realized exactly by scaled basis
/// vectors; the others draw independent rows from the counter stream.
MatrixXd generate_gradients(const SpectrumSpec& spec, Index n, Index d,
                            std::uint64_t seed);

/// Random d-vector with i.i.d. standard normal entries.
VectorXd random_normal_vector(Index d, std::uint64_t key);

/// Random unit vector.
VectorXd random_unit_vector(Index d, std::uint64_t key);

/// Random d x r matrix with orthonormal columns (QR of a Gaussian block).
MatrixXd random_orthonormal(Index d, Index r, std::uint64_t key);

/// Random rank-r PSD matrix with the given eigenvalues in a random basis.
SymmetricMatrix random_psd(const VectorXd& eigenvalues, Index d,
                           std::uint64_t key);

/// Random unit vector in range(F), drawn as U Lambda^{1/2} y normalized
/// whitened: g = U Lambda^{1/2} y with ||y|| = 1, so tau_0(g, g) = 1.
VectorXd random_range_gradient(const CompactEigen& eig, std::uint64_t key);

}  // namespace sketchif

#endif  // SKETCHIF_SYNTHETIC_HPP
