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

#include "sketchif/synthetic.hpp"

#include <cmath>
#include <vector>

#include "sketchif/rng.hpp"

namespace sketchif {

SpectrumSpec SpectrumSpec::powerlaw(double exponent) {
  SpectrumSpec s;
  s.kind = Kind::kPowerLaw;
  s.exponent = exponent;
  return s;
}

SpectrumSpec SpectrumSpec::flat() {
  SpectrumSpec s;
  s.kind = Kind::kFlat;
  return s;
}

SpectrumSpec SpectrumSpec::hard(Index k, Index r, double eta, double lambda) {
  SpectrumSpec s;
  s.kind = Kind::kHard;
  s.k = k;
  s.r = r;
  s.eta = eta;
  s.lambda = lambda;
  return s;
}

HardInstance::HardInstance(Index k_, Index r_, Index d_, double lambda_,
                           double eta_)
    : k(k_), r(r_), d(d_), lambda(lambda_), eta(eta_) {
  if (k < 1 || k > r || r > d) {
    throw InvalidParamsError("HardInstance: need 1 <= k <= r <= d");
  }
  if (!(lambda > 0.0) || !(eta > 0.0)) {
    throw InvalidParamsError("HardInstance: lambda and eta must be > 0");
  }
}

VectorXd HardInstance::spectrum() const {
  VectorXd s = VectorXd::Zero(d);
  s.head(k).setConstant(lambda);
  s.segment(k, r - k).setConstant(eta * lambda);
  return s;
}

SymmetricMatrix HardInstance::matrix() const {
  return SymmetricMatrix::diagonal(spectrum());
}

double HardInstance::effective_dim_closed_form() const {
  return static_cast<double>(k) / 2.0 +
         eta * static_cast<double>(r - k) / (1.0 + eta);
}

VectorXd HardInstance::gradient_from_leading(const VectorXd& y_l) const {
  if (y_l.size() != k) {
    throw DimMismatchError("HardInstance: y_L must live in the top block");
  }
  VectorXd g = VectorXd::Zero(d);
  g.head(k) = std::sqrt(lambda) * y_l;
  return g;
}

VectorXd spectrum_scales(const SpectrumSpec& spec, Index d) {
  VectorXd scales(d);
  switch (spec.kind) {
    case SpectrumSpec::Kind::kFlat:
      scales.setOnes();
      break;
    case SpectrumSpec::Kind::kPowerLaw:
      for (Index j = 0; j < d; ++j) {
        scales(j) = std::pow(static_cast<double>(j + 1),
                             -spec.exponent / 2.0);
      }
      break;
    case SpectrumSpec::Kind::kHard: {
      if (spec.k < 1 || spec.k > spec.r || spec.r > d) {
        throw InvalidParamsError("spectrum_scales: bad hard parameters");
      }
      scales.setZero();
      scales.head(spec.k).setConstant(std::sqrt(spec.lambda));
      scales.segment(spec.k, spec.r - spec.k)
          .setConstant(std::sqrt(spec.eta * spec.lambda));
      break;
    }
  }
  return scales;
}

MatrixXd generate_gradients(const SpectrumSpec& spec, Index n, Index d,
                            std::uint64_t seed) {
  if (n < 1 || d < 1) {
    throw InvalidParamsError("generate_gradients: n, d must be >= 1");
  }
  const VectorXd scales = spectrum_scales(spec, d);
  MatrixXd grads(n, d);
  if (spec.kind == SpectrumSpec::Kind::kHard) {
    // Scaled basis vectors realize the diagonal Fisher exactly:
    // coordinate j receives total squared mass n * lambda_j.
    grads.setZero();
    std::vector<Index> counts(static_cast<std::size_t>(spec.r), Index{0});
    for (Index i = 0; i < n; ++i) {
      ++counts[static_cast<std::size_t>(i % spec.r)];
    }
    for (Index i = 0; i < n; ++i) {
      const Index j = i % spec.r;
      const double lambda_j = scales(j) * scales(j);
      const double count = static_cast<double>(
          counts[static_cast<std::size_t>(j)]);
      grads(i, j) = std::sqrt(lambda_j * static_cast<double>(n) / count);
    }
    return grads;
  }
  for (Index i = 0; i < n; ++i) {
    const std::uint64_t row_key =
        derive_key(seed, static_cast<std::uint64_t>(i));
    for (Index j = 0; j < d; ++j) {
      grads(i, j) =
          scales(j) * normal_at(row_key, static_cast<std::uint64_t>(j));
    }
  }
  return grads;
}

VectorXd random_normal_vector(Index d, std::uint64_t key) {
  VectorXd v(d);
  for (Index i = 0; i < d; ++i) {
    v(i) = normal_at(key, static_cast<std::uint64_t>(i));
  }
  return v;
}

VectorXd random_unit_vector(Index d, std::uint64_t key) {
  VectorXd v = random_normal_vector(d, key);
  const double norm = v.norm();
  if (norm == 0.0) return VectorXd::Unit(d, 0);
  return v / norm;
}

MatrixXd random_orthonormal(Index d, Index r, std::uint64_t key) {
  if (r > d) {
    throw InvalidParamsError("random_orthonormal: r must be <= d");
  }
  MatrixXd block(d, r);
  for (Index j = 0; j < r; ++j) {
    block.col(j) =
        random_normal_vector(d, derive_key(key, static_cast<std::uint64_t>(j)));
  }
  const Eigen::HouseholderQR<MatrixXd> qr(block);
  MatrixXd q = qr.householderQ() * MatrixXd::Identity(d, r);
  // Deterministic sign convention, matching the eigenbasis one.
  for (Index j = 0; j < r; ++j) {
    for (Index i = 0; i < d; ++i) {
      if (q(i, j) != 0.0) {
        if (q(i, j) < 0.0) q.col(j) = -q.col(j);
        break;
      }
    }
  }
  return q;
}

SymmetricMatrix random_psd(const VectorXd& eigenvalues, Index d,
                           std::uint64_t key) {
  const Index r = eigenvalues.size();
  const MatrixXd q = random_orthonormal(d, r, key);
  return SymmetricMatrix(q * eigenvalues.asDiagonal() * q.transpose());
}

VectorXd random_range_gradient(const CompactEigen& eig, std::uint64_t key) {
  if (eig.rank() == 0) return VectorXd::Zero(eig.dim());
  const VectorXd y = random_unit_vector(eig.rank(), key);
  return eig.basis() * eig.lambdas().cwiseSqrt().asDiagonal() * y;
}

}  // namespace sketchif
