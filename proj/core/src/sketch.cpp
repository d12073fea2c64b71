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

#include "sketchif/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sketchif/rng.hpp"

namespace sketchif {

std::string family_name(SketchFamily family) {
  switch (family) {
    case SketchFamily::kGaussian:
      return "gaussian";
    case SketchFamily::kRademacher:
      return "rademacher";
    case SketchFamily::kSparseJl:
      return "sparse_jl";
    case SketchFamily::kKronecker:
      return "kronecker";
  }
  return "unknown";
}

SketchSpec SketchSpec::gaussian(Index m, Index d, std::uint64_t seed) {
  SketchSpec s;
  s.family = SketchFamily::kGaussian;
  s.m = m;
  s.d = d;
  s.seed = seed;
  s.validate();
  return s;
}

SketchSpec SketchSpec::rademacher(Index m, Index d, std::uint64_t seed) {
  SketchSpec s;
  s.family = SketchFamily::kRademacher;
  s.m = m;
  s.d = d;
  s.seed = seed;
  s.validate();
  return s;
}

SketchSpec SketchSpec::sparse_jl(Index m, Index d, std::uint64_t seed,
                                 int s_nnz) {
  SketchSpec s;
  s.family = SketchFamily::kSparseJl;
  s.m = m;
  s.d = d;
  s.seed = seed;
  s.sparsity = s_nnz > 0
                   ? s_nnz
                   : static_cast<int>(std::min<Index>(kDefaultSparseJlNnzCap,
                                                      m));
  s.validate();
  return s;
}

SketchSpec SketchSpec::kronecker(SketchSpec spec_a, SketchSpec spec_e) {
  SketchSpec s;
  s.family = SketchFamily::kKronecker;
  s.m = spec_a.m * spec_e.m;
  s.d = spec_a.d * spec_e.d;
  s.seed = spec_a.seed;
  s.spec_a = std::make_shared<SketchSpec>(std::move(spec_a));
  s.spec_e = std::make_shared<SketchSpec>(std::move(spec_e));
  s.validate();
  return s;
}

void SketchSpec::validate() const {
  if (m < 1 || d < 1) {
    throw InvalidSpecError("SketchSpec: m and d must be >= 1");
  }
  switch (family) {
    case SketchFamily::kGaussian:
    case SketchFamily::kRademacher:
      if (static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(d) >
          kDenseEntryCap) {
        throw InvalidSpecError(
            "SketchSpec: dense representation over the entry cap; use "
            "sparse_jl or kronecker");
      }
      break;
    case SketchFamily::kSparseJl:
      if (sparsity < 1 || sparsity > m) {
        throw InvalidSpecError("SketchSpec: sparse_jl needs 1 <= s <= m");
      }
      break;
    case SketchFamily::kKronecker: {
      if (!spec_a || !spec_e) {
        throw InvalidSpecError("SketchSpec: kronecker factors missing");
      }
      if (spec_a->family == SketchFamily::kKronecker ||
          spec_e->family == SketchFamily::kKronecker) {
        throw InvalidSpecError("SketchSpec: nested kronecker factors");
      }
      spec_a->validate();
      spec_e->validate();
      if (m != spec_a->m * spec_e->m || d != spec_a->d * spec_e->d) {
        throw InvalidSpecError("SketchSpec: kronecker dims inconsistent");
      }
      break;
    }
  }
}

namespace {

MatrixXd build_gaussian(const SketchSpec& spec) {
  MatrixXd p(spec.m, spec.d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(spec.m));
  for (Index j = 0; j < spec.d; ++j) {
    const std::uint64_t col_key =
        derive_key(spec.seed, static_cast<std::uint64_t>(j));
    for (Index i = 0; i < spec.m; ++i) {
      p(i, j) = scale * normal_at(col_key, static_cast<std::uint64_t>(i));
    }
  }
  return p;
}

MatrixXd build_rademacher(const SketchSpec& spec) {
  MatrixXd p(spec.m, spec.d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(spec.m));
  for (Index j = 0; j < spec.d; ++j) {
    const std::uint64_t col_key =
        derive_key(spec.seed, static_cast<std::uint64_t>(j));
    for (Index i = 0; i < spec.m; ++i) {
      const bool bit =
          (rand_u64_at(col_key, static_cast<std::uint64_t>(i)) & 1u) != 0;
      p(i, j) = bit ? scale : -scale;
    }
  }
  return p;
}

SparseColumns build_sparse_jl(const SketchSpec& spec) {
  SparseColumns cols;
  cols.m = spec.m;
  cols.d = spec.d;
  cols.s = spec.sparsity;
  const auto s = static_cast<std::size_t>(spec.sparsity);
  cols.rows.resize(static_cast<std::size_t>(spec.d) * s);
  cols.values.resize(static_cast<std::size_t>(spec.d) * s);
  const double mag = 1.0 / std::sqrt(static_cast<double>(spec.sparsity));

  std::vector<std::int32_t> chosen;
  for (Index j = 0; j < spec.d; ++j) {
    const std::uint64_t col_key =
        derive_key(spec.seed, static_cast<std::uint64_t>(j));
    // Floyd's sampling: s distinct rows uniformly without replacement.
    chosen.clear();
    std::set<std::int32_t> taken;
    std::uint64_t draw = 0;
    for (std::uint64_t t = static_cast<std::uint64_t>(spec.m) - s;
         t < static_cast<std::uint64_t>(spec.m); ++t) {
      const auto candidate =
          static_cast<std::int32_t>(uniform_below_at(col_key, draw++, t + 1));
      if (taken.count(candidate)) {
        taken.insert(static_cast<std::int32_t>(t));
      } else {
        taken.insert(candidate);
      }
    }
    chosen.assign(taken.begin(), taken.end());  // ascending
    // Signs keyed by slot position after the canonical sort.
    for (std::size_t t = 0; t < s; ++t) {
      const bool bit = (rand_u64_at(col_key, s + t) & 1u) != 0;
      cols.rows[static_cast<std::size_t>(j) * s + t] = chosen[t];
      cols.values[static_cast<std::size_t>(j) * s + t] = bit ? mag : -mag;
    }
  }
  return cols;
}

VectorXd sparse_apply(const SparseColumns& cols, const VectorXd& v) {
  VectorXd out = VectorXd::Zero(cols.m);
  const auto s = static_cast<std::size_t>(cols.s);
  for (Index j = 0; j < cols.d; ++j) {
    const double vj = v(j);
    if (vj == 0.0) continue;
    const std::size_t base = static_cast<std::size_t>(j) * s;
    for (std::size_t t = 0; t < s; ++t) {
      out(cols.rows[base + t]) += cols.values[base + t] * vj;
    }
  }
  return out;
}

VectorXd sparse_apply_transpose(const SparseColumns& cols,
                                const VectorXd& y) {
  VectorXd out(cols.d);
  const auto s = static_cast<std::size_t>(cols.s);
  for (Index j = 0; j < cols.d; ++j) {
    const std::size_t base = static_cast<std::size_t>(j) * s;
    double acc = 0.0;
    for (std::size_t t = 0; t < s; ++t) {
      acc += cols.values[base + t] * y(cols.rows[base + t]);
    }
    out(j) = acc;
  }
  return out;
}

}  // namespace

RealizedSketch build_sketch(const SketchSpec& spec) {
  spec.validate();
  RealizedSketch sk;
  sk.spec_ = spec;
  switch (spec.family) {
    case SketchFamily::kGaussian:
      sk.repr_ = build_gaussian(spec);
      break;
    case SketchFamily::kRademacher:
      sk.repr_ = build_rademacher(spec);
      break;
    case SketchFamily::kSparseJl:
      sk.repr_ = build_sparse_jl(spec);
      break;
    case SketchFamily::kKronecker: {
      RealizedSketch::FactorPair fp;
      fp.a = std::make_shared<RealizedSketch>(build_sketch(*spec.spec_a));
      fp.e = std::make_shared<RealizedSketch>(build_sketch(*spec.spec_e));
      sk.repr_ = std::move(fp);
      break;
    }
  }
  return sk;
}

RealizedSketch RealizedSketch::from_dense(MatrixXd p, std::uint64_t seed) {
  RealizedSketch sk;
  sk.spec_.family = SketchFamily::kGaussian;
  sk.spec_.m = p.rows();
  sk.spec_.d = p.cols();
  sk.spec_.seed = seed;
  sk.repr_ = std::move(p);
  return sk;
}

const RealizedSketch& RealizedSketch::factor_a() const {
  if (!is_factorized()) {
    throw FamilyMismatchError("RealizedSketch::factor_a: not factorized");
  }
  return *std::get<FactorPair>(repr_).a;
}

const RealizedSketch& RealizedSketch::factor_e() const {
  if (!is_factorized()) {
    throw FamilyMismatchError("RealizedSketch::factor_e: not factorized");
  }
  return *std::get<FactorPair>(repr_).e;
}

VectorXd RealizedSketch::apply(const VectorXd& v) const {
  if (v.size() != d()) {
    throw DimMismatchError("RealizedSketch::apply: dimension mismatch");
  }
  if (const auto* dense = std::get_if<MatrixXd>(&repr_)) {
    return *dense * v;
  }
  if (const auto* cols = std::get_if<SparseColumns>(&repr_)) {
    return sparse_apply(*cols, v);
  }
  const auto& fp = std::get<FactorPair>(repr_);
  const MatrixXd g = unvec(v, fp.e->d(), fp.a->d());
  return vec(apply_factorized_matrix(*fp.a, *fp.e, g));
}

MatrixXd RealizedSketch::apply_matrix(const MatrixXd& x) const {
  if (x.rows() != d()) {
    throw DimMismatchError("RealizedSketch::apply_matrix: dim mismatch");
  }
  if (const auto* dense = std::get_if<MatrixXd>(&repr_)) {
    return *dense * x;
  }
  MatrixXd out(m(), x.cols());
  for (Index c = 0; c < x.cols(); ++c) {
    out.col(c) = apply(x.col(c));
  }
  return out;
}

VectorXd RealizedSketch::apply_transpose(const VectorXd& y) const {
  if (y.size() != m()) {
    throw DimMismatchError("RealizedSketch::apply_transpose: dim mismatch");
  }
  if (const auto* dense = std::get_if<MatrixXd>(&repr_)) {
    return dense->transpose() * y;
  }
  if (const auto* cols = std::get_if<SparseColumns>(&repr_)) {
    return sparse_apply_transpose(*cols, y);
  }
  const auto& fp = std::get<FactorPair>(repr_);
  // (P_A kron P_E)^T vec(Y) = vec(P_E^T Y P_A).
  const MatrixXd ym = unvec(y, fp.e->m(), fp.a->m());
  MatrixXd out(fp.e->d(), fp.a->d());
  MatrixXd left(fp.e->d(), fp.a->m());
  for (Index c = 0; c < ym.cols(); ++c) {
    left.col(c) = fp.e->apply_transpose(ym.col(c));
  }
  for (Index r = 0; r < left.rows(); ++r) {
    out.row(r) = fp.a->apply_transpose(left.row(r).transpose()).transpose();
  }
  return vec(out);
}

MatrixXd RealizedSketch::to_dense() const {
  if (static_cast<std::uint64_t>(m()) * static_cast<std::uint64_t>(d()) >
      kDenseEntryCap) {
    throw CapExceededError("RealizedSketch::to_dense: over the entry cap");
  }
  if (const auto* dense = std::get_if<MatrixXd>(&repr_)) {
    return *dense;
  }
  if (const auto* cols = std::get_if<SparseColumns>(&repr_)) {
    MatrixXd out = MatrixXd::Zero(m(), d());
    const auto s = static_cast<std::size_t>(cols->s);
    for (Index j = 0; j < d(); ++j) {
      const std::size_t base = static_cast<std::size_t>(j) * s;
      for (std::size_t t = 0; t < s; ++t) {
        out(cols->rows[base + t], j) = cols->values[base + t];
      }
    }
    return out;
  }
  const auto& fp = std::get<FactorPair>(repr_);
  return kron(fp.a->to_dense(), fp.e->to_dense());
}

MatrixXd apply_factorized_matrix(const RealizedSketch& sk_a,
                                 const RealizedSketch& sk_e,
                                 const MatrixXd& g) {
  if (g.rows() != sk_e.d() || g.cols() != sk_a.d()) {
    throw DimMismatchError("apply_factorized_matrix: G must be d_E x d_A");
  }
  // P_E G, then (P_E G) P_A^T.
  MatrixXd left(sk_e.m(), g.cols());
  for (Index c = 0; c < g.cols(); ++c) {
    left.col(c) = sk_e.apply(g.col(c));
  }
  MatrixXd out(sk_e.m(), sk_a.m());
  for (Index r = 0; r < left.rows(); ++r) {
    out.row(r) = sk_a.apply(left.row(r).transpose()).transpose();
  }
  return out;
}

SketchedCurvature SketchedCurvature::make_dense(SymmetricMatrix m) {
  SketchedCurvature sc;
  sc.dense_ = std::move(m);
  return sc;
}

SketchedCurvature SketchedCurvature::make_factorized(SymmetricMatrix a,
                                                     SymmetricMatrix e) {
  SketchedCurvature sc;
  sc.factors_ = std::make_pair(std::move(a), std::move(e));
  return sc;
}

const SymmetricMatrix& SketchedCurvature::dense() const {
  if (!dense_) {
    throw FamilyMismatchError("SketchedCurvature::dense: factorized");
  }
  return *dense_;
}

const SymmetricMatrix& SketchedCurvature::factor_a() const {
  if (!factors_) {
    throw FamilyMismatchError("SketchedCurvature::factor_a: dense");
  }
  return factors_->first;
}

const SymmetricMatrix& SketchedCurvature::factor_e() const {
  if (!factors_) {
    throw FamilyMismatchError("SketchedCurvature::factor_e: dense");
  }
  return factors_->second;
}

namespace {

SymmetricMatrix sketch_dense_factor(const RealizedSketch& sk,
                                    const SymmetricMatrix& f) {
  const MatrixXd pf = sk.apply_matrix(f.entries());  // m x d
  MatrixXd pfp(sk.m(), sk.m());
  for (Index r = 0; r < pf.rows(); ++r) {
    pfp.row(r) = sk.apply(pf.row(r).transpose()).transpose();
  }
  return SymmetricMatrix(pfp);  // symmetrized on construction
}

}  // namespace

SketchedCurvature sketch_curvature(const RealizedSketch& sk,
                                   const CurvatureOperator& f) {
  if (sk.d() != f.dim()) {
    throw DimMismatchError("sketch_curvature: dimension mismatch");
  }
  if (sk.is_factorized() && f.is_factorized()) {
    const auto& pair = f.pair();
    if (sk.factor_a().d() != pair.dim_a() ||
        sk.factor_e().d() != pair.dim_e()) {
      throw DimMismatchError("sketch_curvature: factor dims mismatch");
    }
    return SketchedCurvature::make_factorized(
        sketch_dense_factor(sk.factor_a(), pair.factor_a()),
        sketch_dense_factor(sk.factor_e(), pair.factor_e()));
  }
  // Mixed combinations go through dense materialization under the cap.
  const std::uint64_t mm =
      static_cast<std::uint64_t>(sk.m()) * static_cast<std::uint64_t>(sk.m());
  if (mm > kDenseEntryCap) {
    throw CapExceededError("sketch_curvature: dense m x m over entry cap");
  }
  return SketchedCurvature::make_dense(sketch_dense_factor(sk, f.to_dense()));
}

double gram_deviation(const RealizedSketch& sk, const MatrixXd& m) {
  if (m.rows() != sk.d()) {
    throw DimMismatchError("gram_deviation: M must have d rows");
  }
  if (m.size() == 0 || m.cols() == 0) return 0.0;
  const MatrixXd pm = sk.apply_matrix(m);
  const MatrixXd dev = pm.transpose() * pm - m.transpose() * m;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (dev + dev.transpose()),
                                             Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace sketchif
