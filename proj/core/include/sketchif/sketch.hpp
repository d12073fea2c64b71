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

#ifndef SKETCHIF_SKETCH_HPP
#define SKETCHIF_SKETCH_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "sketchif/curvature.hpp"

namespace sketchif {

enum class SketchFamily { kGaussian, kRademacher, kSparseJl, kKronecker };

std::string family_name(SketchFamily family);

/// Dense representations are limited to this many entries; larger sketches
/// must be sparse or factorized.
inline constexpr std::uint64_t kDenseEntryCap = std::uint64_t{1} << 26;

inline constexpr int kDefaultSparseJlNnzCap = 8;

/// Recipe for a sketching operator: family, target dimension m, ambient
/// dimension d, and the seed of the counter-based random stream. The
/// realization is a pure function of the spec.
struct SketchSpec {
  SketchFamily family = SketchFamily::kGaussian;
  Index m = 0;
  Index d = 0;
  std::uint64_t seed = 0;
  // Sparse JL only: nonzeros per column, 1 <= s <= m.
  int sparsity = 0;
  // Kronecker only: factor recipes (non-Kronecker families).
  std::shared_ptr<SketchSpec> spec_a;
  std::shared_ptr<SketchSpec> spec_e;

  static SketchSpec gaussian(Index m, Index d, std::uint64_t seed);
  static SketchSpec rademacher(Index m, Index d, std::uint64_t seed);
  static SketchSpec sparse_jl(Index m, Index d, std::uint64_t seed, int s = 0);
  static SketchSpec kronecker(SketchSpec spec_a, SketchSpec spec_e);

  void validate() const;
};

/// Realized sparse-JL columns: per column, `s` distinct row indices
/// (ascending) and the matching signed values +-1/sqrt(s).
struct SparseColumns {
  Index m = 0;
  Index d = 0;
  int s = 0;
  std::vector<std::int32_t> rows;  // d * s entries
  std::vector<double> values;      // d * s entries
};

/// A realized sketching operator P in R^{m x d}.
class RealizedSketch {
 public:
  const SketchSpec& spec() const { return spec_; }
  Index m() const { return spec_.m; }
  Index d() const { return spec_.d; }
  bool is_factorized() const {
    return spec_.family == SketchFamily::kKronecker;
  }

  /// P v.
  VectorXd apply(const VectorXd& v) const;

  /// P applied to each column of x.
  MatrixXd apply_matrix(const MatrixXd& x) const;

  /// P^T y (adjoint).
  VectorXd apply_transpose(const VectorXd& y) const;

  /// Dense materialization of P (cap-guarded; test support).
  MatrixXd to_dense() const;

  const RealizedSketch& factor_a() const;
  const RealizedSketch& factor_e() const;

  /// Test-only injection of an explicit dense operator (e.g. P = I).
  static RealizedSketch from_dense(MatrixXd p, std::uint64_t seed = 0);

  friend RealizedSketch build_sketch(const SketchSpec& spec);

 private:
  RealizedSketch() = default;

  SketchSpec spec_;
  struct FactorPair {
    std::shared_ptr<RealizedSketch> a;
    std::shared_ptr<RealizedSketch> e;
  };
  std::variant<MatrixXd, SparseColumns, FactorPair> repr_;
};

/// Draws the sketch described by `spec`. Same spec, same bits.
RealizedSketch build_sketch(const SketchSpec& spec);

/// vec(P_E G P_A^T) computed as two small multiplies; `g` is d_E x d_A.
MatrixXd apply_factorized_matrix(const RealizedSketch& sk_a,
                                 const RealizedSketch& sk_e,
                                 const MatrixXd& g);

/// Sketched curvature P F P^T: dense m x m for a dense path, or the factor
/// pair (P_A A P_A^T, P_E E P_E^T) without forming the product. Mixed
/// combinations (factorized sketch with dense F, or dense sketch with
/// factorized F) go through dense materialization under the Kronecker cap.
class SketchedCurvature {
 public:
  bool is_factorized() const { return factors_.has_value(); }
  const SymmetricMatrix& dense() const;
  const SymmetricMatrix& factor_a() const;
  const SymmetricMatrix& factor_e() const;

  static SketchedCurvature make_dense(SymmetricMatrix m);
  static SketchedCurvature make_factorized(SymmetricMatrix a,
                                           SymmetricMatrix e);

 private:
  std::optional<SymmetricMatrix> dense_;
  std::optional<std::pair<SymmetricMatrix, SymmetricMatrix>> factors_;
};

SketchedCurvature sketch_curvature(const RealizedSketch& sk,
                                   const CurvatureOperator& f);

/// || M^T (P^T P - I) M ||_2.
double gram_deviation(const RealizedSketch& sk, const MatrixXd& m);

}  // namespace sketchif

#endif  // SKETCHIF_SKETCH_HPP
