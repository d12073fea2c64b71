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

#include "sketchif/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <utility>

namespace sketchif {

namespace {

constexpr std::uint32_t kFormatVersion = 1;

// The library targets little-endian hosts; the on-disk layout is declared
// little-endian, so raw reads/writes of u32/u64/f64 are exact there.

void write_bytes(std::ofstream& out, const void* data, std::size_t n) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  if (!out) throw IoError("write failed");
}

void read_bytes(std::ifstream& in, void* data, std::size_t n) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
  if (in.gcount() != static_cast<std::streamsize>(n)) {
    throw IoError("unexpected end of file");
  }
}

void write_u32(std::ofstream& out, std::uint32_t v) {
  write_bytes(out, &v, sizeof(v));
}
void write_u64(std::ofstream& out, std::uint64_t v) {
  write_bytes(out, &v, sizeof(v));
}
void write_f64(std::ofstream& out, double v) {
  write_bytes(out, &v, sizeof(v));
}

std::uint32_t read_u32(std::ifstream& in) {
  std::uint32_t v = 0;
  read_bytes(in, &v, sizeof(v));
  return v;
}
std::uint64_t read_u64(std::ifstream& in) {
  std::uint64_t v = 0;
  read_bytes(in, &v, sizeof(v));
  return v;
}
double read_f64(std::ifstream& in) {
  double v = 0;
  read_bytes(in, &v, sizeof(v));
  return v;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  return in;
}

void expect_magic(std::ifstream& in, const char* magic,
                  const std::string& path) {
  char buf[4];
  read_bytes(in, buf, 4);
  if (std::memcmp(buf, magic, 4) != 0) {
    throw IoError("bad magic in " + path + " (expected " +
                  std::string(magic, 4) + ")");
  }
}

void expect_version(std::ifstream& in, const std::string& path) {
  const std::uint32_t version = read_u32(in);
  if (version != kFormatVersion) {
    throw IoError("unsupported version " + std::to_string(version) + " in " +
                  path);
  }
}

void write_matrix_rowmajor(std::ofstream& out, const MatrixXd& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      write_f64(out, m(i, j));
    }
  }
}

MatrixXd read_matrix_rowmajor(std::ifstream& in, Index rows, Index cols) {
  MatrixXd m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      m(i, j) = read_f64(in);
    }
  }
  return m;
}

void write_eigen_payload(std::ofstream& out, const CompactEigen& eig) {
  write_u64(out, static_cast<std::uint64_t>(eig.dim()));
  write_u64(out, static_cast<std::uint64_t>(eig.rank()));
  write_f64(out, eig.policy().rel_tol);
  write_f64(out, eig.policy().abs_tol);
  for (Index i = 0; i < eig.rank(); ++i) write_f64(out, eig.lambdas()(i));
  write_matrix_rowmajor(out, eig.basis());
}

CompactEigen read_eigen_payload(std::ifstream& in, const std::string& path) {
  const auto d = static_cast<Index>(read_u64(in));
  const auto r = static_cast<Index>(read_u64(in));
  if (d < 0 || r < 0 || r > d) {
    throw IoError("inconsistent eigen cache dims in " + path);
  }
  RankPolicy policy;
  policy.rel_tol = read_f64(in);
  policy.abs_tol = read_f64(in);
  VectorXd lambdas(r);
  for (Index i = 0; i < r; ++i) lambdas(i) = read_f64(in);
  MatrixXd basis = read_matrix_rowmajor(in, d, r);
  if (!lambdas.allFinite() || !basis.allFinite()) {
    throw IoError("non-finite eigen cache payload in " + path);
  }
  for (Index i = 0; i + 1 < r; ++i) {
    if (lambdas(i + 1) > lambdas(i)) {
      throw IoError("eigen cache eigenvalues not descending in " + path);
    }
  }
  if (r > 0 && lambdas(r - 1) <= 0.0) {
    throw IoError("eigen cache has non-positive eigenvalue in " + path);
  }
  return CompactEigen(d, std::move(basis), std::move(lambdas), policy);
}

}  // namespace

void write_gradient_file(const std::string& path, const MatrixXd& grads) {
  if (!grads.allFinite()) {
    throw IoError("gradient matrix has non-finite values");
  }
  std::ofstream out = open_out(path);
  write_bytes(out, "GRDF", 4);
  write_u32(out, kFormatVersion);
  write_u64(out, static_cast<std::uint64_t>(grads.rows()));
  write_u64(out, static_cast<std::uint64_t>(grads.cols()));
  write_matrix_rowmajor(out, grads);
}

MatrixXd read_gradient_file(const std::string& path) {
  std::ifstream in = open_in(path);
  expect_magic(in, "GRDF", path);
  expect_version(in, path);
  const auto n = static_cast<Index>(read_u64(in));
  const auto d = static_cast<Index>(read_u64(in));
  if (n < 1 || d < 1) throw IoError("empty gradient file: " + path);
  MatrixXd grads = read_matrix_rowmajor(in, n, d);
  char extra;
  if (in.read(&extra, 1) && in.gcount() == 1) {
    throw IoError("trailing bytes in " + path);
  }
  if (!grads.allFinite()) {
    throw IoError("non-finite gradient values in " + path);
  }
  return grads;
}

void write_factor_file(const std::string& path, const SymmetricMatrix& a,
                       const SymmetricMatrix& e) {
  std::ofstream out = open_out(path);
  write_bytes(out, "KFCF", 4);
  write_u32(out, kFormatVersion);
  write_u64(out, static_cast<std::uint64_t>(a.dim()));
  write_matrix_rowmajor(out, a.entries());
  write_u64(out, static_cast<std::uint64_t>(e.dim()));
  write_matrix_rowmajor(out, e.entries());
}

FactorPairMatrices read_factor_file(const std::string& path) {
  std::ifstream in = open_in(path);
  expect_magic(in, "KFCF", path);
  expect_version(in, path);
  const auto da = static_cast<Index>(read_u64(in));
  if (da < 1) throw IoError("bad factor dim in " + path);
  MatrixXd a = read_matrix_rowmajor(in, da, da);
  const auto de = static_cast<Index>(read_u64(in));
  if (de < 1) throw IoError("bad factor dim in " + path);
  MatrixXd e = read_matrix_rowmajor(in, de, de);
  for (const MatrixXd* m : {&a, &e}) {
    if (!m->allFinite()) throw IoError("non-finite factor in " + path);
    const double scale = std::max(1.0, m->cwiseAbs().maxCoeff());
    if (((*m) - m->transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
      throw IoError("factor block not symmetric in " + path);
    }
  }
  return FactorPairMatrices{SymmetricMatrix(a), SymmetricMatrix(e)};
}

void write_eigen_cache(const std::string& path, const CompactEigen& eig) {
  std::ofstream out = open_out(path);
  write_bytes(out, "CEIG", 4);
  write_u32(out, kFormatVersion);
  write_eigen_payload(out, eig);
}

CompactEigen read_eigen_cache(const std::string& path) {
  std::ifstream in = open_in(path);
  expect_magic(in, "CEIG", path);
  expect_version(in, path);
  return read_eigen_payload(in, path);
}

void write_factor_eigen_cache(const std::string& path,
                              const CompactEigen& eig_a,
                              const CompactEigen& eig_e) {
  std::ofstream out = open_out(path);
  write_bytes(out, "KEIG", 4);
  write_u32(out, kFormatVersion);
  write_eigen_payload(out, eig_a);
  write_eigen_payload(out, eig_e);
}

FactorEigenCache read_factor_eigen_cache(const std::string& path) {
  std::ifstream in = open_in(path);
  expect_magic(in, "KEIG", path);
  expect_version(in, path);
  CompactEigen a = read_eigen_payload(in, path);
  CompactEigen e = read_eigen_payload(in, path);
  return FactorEigenCache{std::move(a), std::move(e)};
}

std::string peek_magic(const std::string& path) {
  std::ifstream in = open_in(path);
  char buf[4];
  read_bytes(in, buf, 4);
  return std::string(buf, 4);
}

CsvWriter::CsvWriter(std::vector<std::string> header)
    : header_(std::move(header)) {}

void CsvWriter::add_row(const std::vector<std::string>& fields) {
  if (fields.size() != header_.size()) {
    throw InvalidParamsError("CsvWriter: field count mismatch");
  }
  rows_.push_back(fields);
}

std::string CsvWriter::str() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) out << ',';
    out << header_[i];
  }
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
  return out.str();
}

void CsvWriter::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  const std::string data = str();
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("write failed: " + path);
}

std::string CsvWriter::format_double(double v) {
  // Shortest representation that round-trips, stable across runs.
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double parsed = 0.0;
  for (int precision = 1; precision <= 16; ++precision) {
    char candidate[64];
    std::snprintf(candidate, sizeof(candidate), "%.*g", precision, v);
    std::sscanf(candidate, "%lf", &parsed);
    if (parsed == v) return candidate;
  }
  return buf;
}

std::string CsvWriter::format_int(long long v) { return std::to_string(v); }

}  // namespace sketchif
