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

#ifndef SKETCHIF_IO_HPP
#define SKETCHIF_IO_HPP

#include <string>
#include <vector>

#include "sketchif/compact_eigen.hpp"
#include "sketchif/kronecker.hpp"

namespace sketchif {

// Binary file layouts (all integers and doubles little-endian):
//
//   Gradient file ("GRDF"): magic, u32 version = 1, u64 n, u64 d, then
//     n*d f64 row-major (one row per per-example gradient).
//   Factor file ("KFCF"): magic, u32 version = 1, then two symmetric
//     blocks A and E, each as u64 dim followed by dim*dim f64 row-major.
//   Eigen cache ("CEIG"): magic, u32 version = 1, u64 d, u64 r,
//     f64 rel_tol, f64 abs_tol, r f64 eigenvalues (descending), then
//     d*r f64 of U, row-major.
//   Factor eigen cache ("KEIG"): magic, u32 version = 1, then two CEIG
//     payloads (without their own magic) for A and E.

/// Writes an n x d gradient matrix as a "GRDF" file.
void write_gradient_file(const std::string& path, const MatrixXd& grads);

/// Reads a "GRDF" file. Validates magic, version, sizes and finiteness.
MatrixXd read_gradient_file(const std::string& path);

/// Writes the two symmetric factors as a "KFCF" file.
void write_factor_file(const std::string& path, const SymmetricMatrix& a,
                       const SymmetricMatrix& e);

struct FactorPairMatrices {
  SymmetricMatrix a;
  SymmetricMatrix e;
};

/// Reads a "KFCF" file; both blocks are checked symmetric within 1e-9.
FactorPairMatrices read_factor_file(const std::string& path);

/// Writes a compact eigendecomposition as a "CEIG" cache.
void write_eigen_cache(const std::string& path, const CompactEigen& eig);
CompactEigen read_eigen_cache(const std::string& path);

/// Writes both factor eigendecompositions as a "KEIG" cache.
void write_factor_eigen_cache(const std::string& path,
                              const CompactEigen& eig_a,
                              const CompactEigen& eig_e);
struct FactorEigenCache {
  CompactEigen eig_a;
  CompactEigen eig_e;
};
FactorEigenCache read_factor_eigen_cache(const std::string& path);

/// Reads the 4-byte magic of a cache/gradient file ("GRDF", "KFCF", "CEIG",
/// "KEIG").
std::string peek_magic(const std::string& path);

/// Minimal RFC-4180-style CSV writer with '\n' line endings and a fixed
/// shortest-round-trip float format, so outputs are byte-stable.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void add_row(const std::vector<std::string>& fields);
  std::string str() const;
  void write(const std::string& path) const;

  static std::string format_double(double v);
  static std::string format_int(long long v);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace sketchif

#endif  // SKETCHIF_IO_HPP
