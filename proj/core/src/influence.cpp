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

#include "sketchif/influence.hpp"

#include <cmath>

namespace sketchif {

namespace {

// Eigendecomposition of P F P^T through its thin Gram factor
// S = P U Lambda^{1/2}: the left singular vectors of S are the
// eigenvectors, the squared singular values the eigenvalues. Going through
// S instead of the assembled m x m product keeps the conditioning of the
// factor rather than its square, which matters for the lambda = 0
// pseudoinverse near the rank threshold.
CompactEigen sketched_eig_from_factor(const RealizedSketch& sk,
                                      const CompactEigen& eig) {
  const Index m = sk.m();
  if (eig.rank() == 0) {
    return CompactEigen(m, MatrixXd(m, 0), VectorXd(0), eig.policy());
  }
  const MatrixXd half =
      eig.basis() * eig.lambdas().cwiseSqrt().asDiagonal();  // d x r
  const std::uint64_t work = static_cast<std::uint64_t>(m) *
                             static_cast<std::uint64_t>(eig.rank());
  if (work > kDenseEntryCap) {
    throw CapExceededError("sketched curvature factor over the entry cap");
  }
  const MatrixXd s = sk.apply_matrix(half);  // m x r
  Eigen::BDCSVD<MatrixXd> svd(s, Eigen::ComputeThinU);
  const VectorXd evals = svd.singularValues().array().square();
  return compact_eigen_from_pairs(m, svd.matrixU(), evals, eig.policy());
}

double pair_score(const CompactEigen& eig, double lambda, const VectorXd& g,
                  const VectorXd& g_prime) {
  if (lambda > 0.0) return g.dot(ridge_apply(eig, lambda, g_prime));
  return g.dot(pinv_apply(eig, g_prime));
}

}  // namespace

double tau_exact(const CurvatureOperator& f, double lambda, const VectorXd& g,
                 const VectorXd& g_prime) {
  if (g.size() != f.dim() || g_prime.size() != f.dim()) {
    throw DimMismatchError("tau_exact: dimension mismatch");
  }
  if (lambda < 0.0) {
    throw OutOfRangeParamError("tau_exact: negative lambda");
  }
  if (lambda > 0.0) return g.dot(f.ridge_apply(lambda, g_prime));
  return g.dot(f.pinv_apply(g_prime));
}

double tau_exact(const CompactEigen& eig, double lambda, const VectorXd& g,
                 const VectorXd& g_prime) {
  if (g.size() != eig.dim() || g_prime.size() != eig.dim()) {
    throw DimMismatchError("tau_exact: dimension mismatch");
  }
  if (lambda < 0.0) {
    throw OutOfRangeParamError("tau_exact: negative lambda");
  }
  return pair_score(eig, lambda, g, g_prime);
}

SketchedInfluence::SketchedInfluence(const RealizedSketch& sk,
                                     const CurvatureOperator& f)
    : sk_(&sk) {
  if (sk.d() != f.dim()) {
    throw DimMismatchError("SketchedInfluence: dimension mismatch");
  }
  if (sk.is_factorized() && f.is_factorized()) {
    const auto& pair = f.pair();
    if (sk.factor_a().d() != pair.dim_a() ||
        sk.factor_e().d() != pair.dim_e()) {
      throw DimMismatchError("SketchedInfluence: factor dims mismatch");
    }
    factor_eig_a_ = sketched_eig_from_factor(sk.factor_a(), pair.eig_a());
    factor_eig_e_ = sketched_eig_from_factor(sk.factor_e(), pair.eig_e());
    return;
  }
  if (f.is_factorized()) {
    // Dense sketch over factorized curvature: product eigensystem of F,
    // materialized through the factor bases under the cap.
    const auto& pair = f.pair();
    const Index ra = pair.eig_a().rank();
    const Index re = pair.eig_e().rank();
    MatrixXd basis(f.dim(), ra * re);
    VectorXd evals(ra * re);
    for (Index i = 0; i < ra; ++i) {
      for (Index j = 0; j < re; ++j) {
        MatrixXd col = pair.eig_e().basis().col(j) *
                       pair.eig_a().basis().col(i).transpose();
        basis.col(i * re + j) = vec(col);
        evals(i * re + j) =
            pair.eig_a().lambdas()(i) * pair.eig_e().lambdas()(j);
      }
    }
    const CompactEigen product_eig = compact_eigen_from_pairs(
        f.dim(), basis, evals, pair.eig_a().policy());
    dense_eig_ = sketched_eig_from_factor(sk, product_eig);
    return;
  }
  dense_eig_ = sketched_eig_from_factor(sk, f.eig());
}

const CompactEigen& SketchedInfluence::sketched_eig() const {
  if (!dense_eig_) {
    throw FamilyMismatchError("SketchedInfluence: factorized path");
  }
  return *dense_eig_;
}

VectorXd SketchedInfluence::solve_projected(double lambda,
                                            const VectorXd& w) const {
  if (dense_eig_) {
    if (lambda > 0.0) return ridge_apply(*dense_eig_, lambda, w);
    return pinv_apply(*dense_eig_, w);
  }
  if (lambda > 0.0) {
    return kron_ridge_apply(*factor_eig_a_, *factor_eig_e_, lambda, w);
  }
  return kron_pinv_apply(*factor_eig_a_, *factor_eig_e_, w);
}

double SketchedInfluence::tau_projected(double lambda, const VectorXd& w,
                                        const VectorXd& w_prime) const {
  const double value = w.dot(solve_projected(lambda, w_prime));
  if (!std::isfinite(value)) {
    throw NumericalBreakdownError("tau_sketched: non-finite score");
  }
  return value;
}

double SketchedInfluence::tau(double lambda, const VectorXd& g,
                              const VectorXd& g_prime) const {
  if (lambda < 0.0) {
    throw OutOfRangeParamError("tau_sketched: negative lambda");
  }
  return tau_projected(lambda, sk_->apply(g), sk_->apply(g_prime));
}

double tau_sketched(const RealizedSketch& sk, const CurvatureOperator& f,
                    double lambda, const VectorXd& g,
                    const VectorXd& g_prime) {
  return SketchedInfluence(sk, f).tau(lambda, g, g_prime);
}

MatrixXd influence_gram(const MatrixXd& train_grads,
                        const MatrixXd& test_grads, const CurvatureOperator& f,
                        double lambda, const RealizedSketch* sk) {
  if (train_grads.cols() != f.dim() || test_grads.cols() != f.dim()) {
    throw DimMismatchError("influence_gram: gradient dim mismatch");
  }
  const Index n = train_grads.rows();
  const Index k = test_grads.rows();
  MatrixXd scores(n, k);
  if (sk == nullptr) {
    for (Index j = 0; j < k; ++j) {
      const VectorXd solved =
          lambda > 0.0 ? f.ridge_apply(lambda, test_grads.row(j).transpose())
                       : f.pinv_apply(test_grads.row(j).transpose());
      scores.col(j) = train_grads * solved;
    }
    return scores;
  }
  const SketchedInfluence sketched(*sk, f);
  const MatrixXd wt = sk->apply_matrix(train_grads.transpose());  // m x n
  const MatrixXd ws = sk->apply_matrix(test_grads.transpose());   // m x k
  for (Index j = 0; j < k; ++j) {
    const VectorXd solved = sketched.solve_projected(lambda, ws.col(j));
    scores.col(j) = wt.transpose() * solved;
  }
  return scores;
}

std::optional<double> normalized_error(const CurvatureOperator& f,
                                       const SketchedInfluence& sketched,
                                       double lambda, const VectorXd& g,
                                       const VectorXd& g_prime) {
  const VectorXd g_par = f.project_range(g);
  const VectorXd gp_par = f.project_range(g_prime);
  const double self_g = g_par.dot(f.pinv_apply(g_par));
  const double self_gp = gp_par.dot(f.pinv_apply(gp_par));
  if (self_g <= 1e-14 || self_gp <= 1e-14) return std::nullopt;
  const double exact = tau_exact(f, lambda, g_par, gp_par);
  const double approx = sketched.tau(lambda, g_par, gp_par);
  return std::abs(approx - exact) / std::sqrt(self_g * self_gp);
}

InfluenceReport influence_report(const CurvatureOperator& f, double lambda,
                                 const VectorXd& g, const VectorXd& g_prime,
                                 const RealizedSketch* sk) {
  InfluenceReport report;
  report.tau_exact = tau_exact(f, lambda, g, g_prime);
  const VectorXd g_par = f.project_range(g);
  const VectorXd gp_par = f.project_range(g_prime);
  report.self_norm_g = g_par.dot(f.pinv_apply(g_par));
  report.self_norm_g_prime = gp_par.dot(f.pinv_apply(gp_par));
  if (sk != nullptr) {
    const SketchedInfluence sketched(*sk, f);
    report.tau_sketched = sketched.tau(lambda, g, g_prime);
    report.normalized_error =
        normalized_error(f, sketched, lambda, g, g_prime);
    report.seed = sk->spec().seed;
    report.m = sk->m();
  }
  return report;
}

}  // namespace sketchif
