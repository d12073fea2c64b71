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

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sketchif/influence.hpp"
#include "sketchif/io.hpp"
#include "sketchif/leakage.hpp"
#include "sketchif/parallel.hpp"
#include "sketchif/planner.hpp"
#include "sketchif/probes.hpp"
#include "sketchif/rng.hpp"
#include "sketchif/synthetic.hpp"

namespace {

using namespace sketchif;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

std::string fmt(double v) { return CsvWriter::format_double(v); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed: " + path);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
  } else {
    write_text(out_path, text);
  }
}

SpectrumSpec parse_spectrum(const std::string& text) {
  if (text == "flat") return SpectrumSpec::flat();
  if (text.rfind("powerlaw:", 0) == 0) {
    return SpectrumSpec::powerlaw(std::stod(text.substr(9)));
  }
  if (text.rfind("hard:", 0) == 0) {
    const std::string body = text.substr(5);
    std::vector<double> parts;
    std::size_t pos = 0;
    while (pos <= body.size()) {
      const std::size_t comma = body.find(',', pos);
      const std::string token = body.substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos);
      if (token.empty()) throw UsageError("bad hard spectrum: " + text);
      parts.push_back(std::stod(token));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (parts.size() < 3 || parts.size() > 4) {
      throw UsageError("hard spectrum needs k,r,eta[,lambda]");
    }
    const double lambda = parts.size() == 4 ? parts[3] : 1.0;
    return SpectrumSpec::hard(static_cast<Index>(parts[0]),
                              static_cast<Index>(parts[1]), parts[2], lambda);
  }
  throw UsageError("unknown spectrum: " + text +
                   " (use powerlaw:<exp>, flat, hard:k,r,eta[,lambda])");
}

CurvatureOperator load_curvature(const std::string& path) {
  const std::string magic = peek_magic(path);
  if (magic == "CEIG") {
    return CurvatureOperator::dense(read_eigen_cache(path));
  }
  if (magic == "KEIG") {
    FactorEigenCache cache = read_factor_eigen_cache(path);
    return CurvatureOperator::factorized(
        KroneckerPair(std::move(cache.eig_a), std::move(cache.eig_e)));
  }
  throw IoError("not a curvature artifact (CEIG/KEIG): " + path);
}

// --sketch values: gaussian | rademacher | sjl:<s> | kron:<famA>x<famE>
SketchSpec parse_flat_sketch(const std::string& family, Index m, Index d,
                             std::uint64_t seed) {
  if (family == "gaussian") return SketchSpec::gaussian(m, d, seed);
  if (family == "rademacher") return SketchSpec::rademacher(m, d, seed);
  if (family.rfind("sjl:", 0) == 0) {
    return SketchSpec::sparse_jl(m, d, seed, std::stoi(family.substr(4)));
  }
  if (family == "sjl") return SketchSpec::sparse_jl(m, d, seed);
  throw UsageError("unknown sketch family: " + family);
}

SketchSpec parse_sketch(const std::string& text, const CurvatureOperator& f,
                        Index m, Index m_a, Index m_e, std::uint64_t seed) {
  if (text.rfind("kron:", 0) == 0) {
    const std::string body = text.substr(5);
    const std::size_t sep = body.find('x');
    if (sep == std::string::npos) {
      throw UsageError("kron sketch needs kron:<famA>x<famE>");
    }
    if (!f.is_factorized()) {
      throw UsageError("kron sketch requires a factorized curvature (KEIG)");
    }
    if (m_a < 1 || m_e < 1) {
      throw UsageError("kron sketch requires --m-a and --m-e");
    }
    return SketchSpec::kronecker(
        parse_flat_sketch(body.substr(0, sep), m_a, f.pair().dim_a(), seed),
        parse_flat_sketch(body.substr(sep + 1), m_e, f.pair().dim_e(),
                          derive_key(seed, 1)));
  }
  if (m < 1) throw UsageError("sketched run requires --m (or --m-mult)");
  return parse_flat_sketch(text, m, f.dim(), seed);
}

int cmd_gen(Index n, Index d, const std::string& spectrum_text,
            std::uint64_t seed, const std::string& out) {
  const SpectrumSpec spec = parse_spectrum(spectrum_text);
  const MatrixXd grads = generate_gradients(spec, n, d, seed);
  write_gradient_file(out, grads);
  std::cerr << "wrote " << n << "x" << d << " gradients to " << out << "\n";
  return kExitOk;
}

int cmd_fisher(const std::string& in, const std::string& out, double rank_tol,
               Index cap) {
  const MatrixXd grads = read_gradient_file(in);
  if (grads.cols() > cap) {
    throw CapExceededError("fisher: d exceeds the dense cap");
  }
  // F = (1/n) G^T G through the SVD of G: eigenvalues sigma_i^2 / n.
  Eigen::BDCSVD<MatrixXd> svd(grads, Eigen::ComputeThinV);
  const VectorXd evals =
      svd.singularValues().array().square() /
      static_cast<double>(grads.rows());
  RankPolicy policy;
  policy.rel_tol = rank_tol;
  const CompactEigen eig =
      compact_eigen_from_pairs(grads.cols(), svd.matrixV(), evals, policy);
  write_eigen_cache(out, eig);
  std::cerr << "fisher spectrum: dim " << eig.dim() << ", rank " << eig.rank()
            << ", written to " << out << "\n";
  return kExitOk;
}

int cmd_kfac_load(const std::string& in, const std::string& out,
                  double rank_tol) {
  const FactorPairMatrices factors = read_factor_file(in);
  RankPolicy policy;
  policy.rel_tol = rank_tol;
  const CompactEigen eig_a = compact_eig(factors.a, policy);
  const CompactEigen eig_e = compact_eig(factors.e, policy);
  write_factor_eigen_cache(out, eig_a, eig_e);
  std::cerr << "factor eigs: A rank " << eig_a.rank() << "/" << eig_a.dim()
            << ", E rank " << eig_e.rank() << "/" << eig_e.dim()
            << ", written to " << out << "\n";
  return kExitOk;
}

int cmd_plan(const std::string& curv_path, double lambda, double eps,
             double delta, double c, bool factorized,
             const std::string& out) {
  const CurvatureOperator f = load_curvature(curv_path);
  nlohmann::json j;
  if (factorized) {
    if (!f.is_factorized()) {
      throw UsageError("--factorized needs a KEIG curvature artifact");
    }
    const FactorizedPlan plan =
        plan_factorized(f.pair().eig_a(), f.pair().eig_e(), lambda, eps,
                        delta, c);
    j["kind"] = "factorized_plan";
    j["lambda"] = plan.lambda;
    j["lambda_a"] = plan.lambda_a;
    j["lambda_e"] = plan.lambda_e;
    j["d_a_eff"] = plan.d_a_eff;
    j["d_e_eff"] = plan.d_e_eff;
    j["m_a"] = plan.m_a;
    j["m_e"] = plan.m_e;
    j["m_total"] = plan.m_total;
    j["epsilon"] = plan.epsilon;
    j["delta"] = plan.delta;
    j["calibration_c"] = plan.calibration_c;
    j["capped_a"] = plan.capped_a;
    j["capped_e"] = plan.capped_e;
  } else {
    const CompactEigen& eig =
        f.is_factorized() ? f.pair().eig_a() : f.eig();
    if (f.is_factorized()) {
      throw UsageError("dense plan needs a CEIG artifact (use --factorized)");
    }
    const PlannerReport plan = plan_sketch_size(eig, lambda, eps, delta, c);
    j["kind"] = "planner_report";
    j["lambda"] = plan.lambda;
    j["d_lambda"] = plan.d_lambda;
    j["rank"] = plan.rank;
    j["dim"] = plan.dim;
    j["m_recommended"] = plan.m_recommended;
    j["epsilon"] = plan.epsilon;
    j["delta"] = plan.delta;
    j["calibration_c"] = plan.calibration_c;
    j["capped"] = plan.capped;
    j["note"] = plan.note;
  }
  emit(j.dump(2), out);
  return kExitOk;
}

int cmd_attribute(const std::string& curv_path, const std::string& train_path,
                  const std::string& test_path, double lambda,
                  const std::string& sketch_text, Index m, Index m_a,
                  Index m_e, std::uint64_t seed, const std::string& out) {
  const CurvatureOperator f = load_curvature(curv_path);
  const MatrixXd train = read_gradient_file(train_path);
  const MatrixXd test = read_gradient_file(test_path);
  if (train.cols() != f.dim() || test.cols() != f.dim()) {
    throw DimMismatchError("attribute: gradient dim != curvature dim");
  }

  std::optional<RealizedSketch> sk;
  if (!sketch_text.empty()) {
    sk = build_sketch(parse_sketch(sketch_text, f, m, m_a, m_e, seed));
  }
  const MatrixXd scores =
      influence_gram(train, test, f, lambda, sk ? &*sk : nullptr);

  CsvWriter csv({"train_idx", "test_idx", "score"});
  for (Index i = 0; i < scores.rows(); ++i) {
    for (Index j = 0; j < scores.cols(); ++j) {
      csv.add_row({CsvWriter::format_int(i), CsvWriter::format_int(j),
                   fmt(scores(i, j))});
    }
  }
  csv.write(out);
  return kExitOk;
}

int cmd_spectrum(const std::string& curv_path, const std::string& out) {
  const CurvatureOperator f = load_curvature(curv_path);
  CsvWriter csv({"kind", "key", "value"});
  VectorXd lambdas;
  if (f.is_factorized()) {
    const VectorXd& a = f.pair().eig_a().lambdas();
    const VectorXd& e = f.pair().eig_e().lambdas();
    lambdas.resize(a.size() * e.size());
    Index idx = 0;
    for (Index i = 0; i < a.size(); ++i) {
      for (Index j = 0; j < e.size(); ++j) lambdas(idx++) = a(i) * e(j);
    }
    std::sort(lambdas.data(), lambdas.data() + lambdas.size(),
              std::greater<double>());
  } else {
    lambdas = f.eig().lambdas();
  }
  for (Index i = 0; i < lambdas.size(); ++i) {
    csv.add_row({"eigenvalue", CsvWriter::format_int(i), fmt(lambdas(i))});
  }
  for (int e = -6; e <= 6; ++e) {
    const double lambda = std::pow(10.0, e);
    csv.add_row({"d_lambda", fmt(lambda), fmt(f.effective_dim(lambda))});
  }
  csv.write(out);
  return kExitOk;
}

int cmd_sweep(const std::string& curv_path, const std::string& lambdas_text,
              const std::string& mults_text, Index trials, Index pairs,
              std::uint64_t seed, const std::string& sketch_family,
              const std::string& train_path, unsigned threads, bool timing,
              const std::string& out) {
  const CurvatureOperator f = load_curvature(curv_path);
  if (f.is_factorized()) {
    throw UsageError("sweep expects a dense (CEIG) curvature artifact");
  }
  const auto parse_list = [](const std::string& text) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t comma = text.find(',', pos);
      const std::string token = text.substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos);
      if (!token.empty()) values.push_back(std::stod(token));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (values.empty()) throw UsageError("empty list");
    return values;
  };
  const std::vector<double> lambdas = parse_list(lambdas_text);
  const std::vector<double> mults = parse_list(mults_text);
  if (trials < 1 || pairs < 1) {
    throw UsageError("sweep: trials and pairs must be >= 1");
  }

  std::optional<MatrixXd> train;
  if (!train_path.empty()) {
    train = read_gradient_file(train_path);
    if (train->cols() != f.dim()) {
      throw DimMismatchError("sweep: gradient dim != curvature dim");
    }
  }

  struct Row {
    double lambda;
    Index m;
    Index trial;
    std::uint64_t seed;
    double d_lambda;
    double p50;
    double p95;
    double leakage_p95;
    long long wall_ms;
  };
  const std::size_t n_cells =
      lambdas.size() * mults.size() * static_cast<std::size_t>(trials);
  std::vector<Row> rows(n_cells);

  const auto percentile = [](std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[hi] * frac;
  };

  parallel_for(
      n_cells,
      [&](std::size_t cell) {
        const auto start = std::chrono::steady_clock::now();
        const std::size_t li = cell / (mults.size() * trials);
        const std::size_t mi = (cell / trials) % mults.size();
        const Index trial = static_cast<Index>(cell % trials);
        const double lambda = lambdas[li];
        // Documented cell-seed mix: one derive_key per row-major cell index.
        const std::uint64_t cell_seed =
            derive_key(seed, static_cast<std::uint64_t>(cell));

        const double d_lambda = f.effective_dim(lambda);
        const Index m = std::max<Index>(
            1, static_cast<Index>(std::ceil(mults[mi] * d_lambda)));
        const RealizedSketch sk = build_sketch(
            parse_flat_sketch(sketch_family, m, f.dim(), cell_seed));
        const SketchedInfluence sketched(sk, f);

        std::vector<double> errors;
        std::vector<double> leakages;
        errors.reserve(static_cast<std::size_t>(pairs));
        const bool has_kernel = f.rank() < f.dim();
        for (Index p = 0; p < pairs; ++p) {
          const std::uint64_t pair_key =
              derive_key(cell_seed, 1000 + static_cast<std::uint64_t>(p));
          VectorXd g, gp;
          if (train) {
            const Index n = train->rows();
            g = train->row(static_cast<Index>(
                               uniform_below_at(pair_key, 0,
                                                static_cast<std::uint64_t>(n))))
                    .transpose();
            gp = train->row(static_cast<Index>(
                                uniform_below_at(pair_key, 1,
                                                 static_cast<std::uint64_t>(n))))
                     .transpose();
          } else {
            g = random_range_gradient(f.eig(), derive_key(pair_key, 2));
            gp = random_range_gradient(f.eig(), derive_key(pair_key, 3));
          }
          const auto err = normalized_error(f, sketched, lambda, g, gp);
          if (err) errors.push_back(*err);
          if (has_kernel) {
            const VectorXd probe =
                random_normal_vector(f.dim(), derive_key(pair_key, 4));
            VectorXd perp = probe - f.project_range(probe);
            const double norm = perp.norm();
            if (norm > 1e-12) {
              perp /= norm;
              leakages.push_back(std::abs(
                  leakage_term(sketched, f, lambda, g, perp).sketched));
            }
          }
        }
        Row& row = rows[cell];
        row.lambda = lambda;
        row.m = m;
        row.trial = trial;
        row.seed = cell_seed;
        row.d_lambda = d_lambda;
        row.p50 = percentile(errors, 0.50);
        row.p95 = percentile(errors, 0.95);
        row.leakage_p95 = percentile(leakages, 0.95);
        const auto elapsed = std::chrono::steady_clock::now() - start;
        row.wall_ms =
            timing ? std::chrono::duration_cast<std::chrono::milliseconds>(
                         elapsed)
                         .count()
                   : 0;
      },
      threads == 0 ? default_threads() : threads);

  CsvWriter csv({"lambda", "m", "trial", "seed", "d_lambda", "eps_lambda_p50",
                 "eps_lambda_p95", "leakage_p95", "wall_time_ms"});
  for (const Row& row : rows) {
    csv.add_row({fmt(row.lambda), CsvWriter::format_int(row.m),
                 CsvWriter::format_int(row.trial), std::to_string(row.seed),
                 fmt(row.d_lambda), fmt(row.p50), fmt(row.p95),
                 fmt(row.leakage_p95), CsvWriter::format_int(row.wall_ms)});
  }
  csv.write(out);
  return kExitOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, unsigned threads,
               const std::string& out) {
  std::vector<ProbeResult> results;
  try {
    results = run_suite(suite, seed, threads);
  } catch (const InvalidParamsError& e) {
    throw UsageError(e.what());
  }
  emit(probe_results_to_json(results), out);
  for (const ProbeResult& r : results) {
    std::cerr << (r.pass ? "PASS " : "FAIL ") << r.name
              << " statistic=" << r.statistic << " threshold=" << r.threshold
              << "\n";
  }
  const bool all_pass = std::all_of(results.begin(), results.end(),
                                    [](const ProbeResult& r) { return r.pass; });
  return all_pass ? kExitOk : kExitFailure;
}

int cmd_leakage(const std::string& curv_path, const std::string& train_path,
                const std::string& test_path, double lambda, Index train_idx,
                const std::string& sketch_text, Index m, Index m_a, Index m_e,
                double eps, double delta, double c, std::uint64_t seed,
                const std::string& out) {
  const CurvatureOperator f = load_curvature(curv_path);
  const MatrixXd train = read_gradient_file(train_path);
  const MatrixXd test = read_gradient_file(test_path);
  if (train.cols() != f.dim() || test.cols() != f.dim()) {
    throw DimMismatchError("leakage: gradient dim != curvature dim");
  }
  if (train_idx < 0 || train_idx >= train.rows()) {
    throw UsageError("leakage: --train-idx out of range");
  }
  const VectorXd g = train.row(train_idx).transpose();

  const RealizedSketch sk =
      build_sketch(parse_sketch(sketch_text, f, m, m_a, m_e, seed));
  const SketchedInfluence sketched(sk, f);

  double epsilon = eps;
  if (epsilon <= 0.0) {
    // Derived from the realized m by inverting the leakage sketch rule.
    MatrixXd stacked(f.dim(), test.rows());
    for (Index j = 0; j < test.rows(); ++j) {
      const RangeKernelSplit split = decompose(f, test.row(j).transpose());
      stacked.col(j) = split.g_perp;
    }
    Eigen::BDCSVD<MatrixXd> svd(stacked);
    Index k_prime = 0;
    const VectorXd sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? 1e-10 * sv(0) : 0.0;
    for (Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > cutoff) ++k_prime;
    }
    const double union_c =
        std::log(static_cast<double>(test.rows()) / delta);
    const double subspace_c =
        static_cast<double>(k_prime) + std::log(1.0 / delta);
    epsilon = std::sqrt(c *
                        (static_cast<double>(f.rank()) +
                         std::min(union_c, subspace_c)) /
                        static_cast<double>(sk.m()));
  }

  CsvWriter csv({"test_idx", "norm_g_par", "norm_g_perp", "tau_exact_perp",
                 "leakage", "bound_unreg", "bound_reg", "lambda", "m",
                 "seed"});
  for (Index j = 0; j < test.rows(); ++j) {
    const LeakageReport report = leakage_report(
        sketched, f, lambda, epsilon, g, test.row(j).transpose());
    csv.add_row({CsvWriter::format_int(j), fmt(report.norm_g_par),
                 fmt(report.norm_g_perp), fmt(report.tau_exact_perp),
                 fmt(report.leakage_value), fmt(report.bound_unreg),
                 fmt(report.bound_reg), fmt(lambda),
                 CsvWriter::format_int(report.m), std::to_string(seed)});
  }
  csv.write(out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sketched influence-function toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string out;
  double lambda = 0.0;
  double eps = 0.25;
  double delta = 0.1;
  double calibration_c = kDefaultPlannerConstant;
  Index trials = 10;
  unsigned threads = 0;
  std::string sketch_family;
  Index m = 0, m_a = 0, m_e = 0;

  // gen
  Index gen_n = 0, gen_d = 0;
  std::string gen_spectrum;
  auto* gen = app.add_subcommand("gen", "generate a synthetic gradient corpus");
  gen->add_option("--n", gen_n, "number of gradients")->required();
  gen->add_option("--d", gen_d, "gradient dimension")->required();
  gen->add_option("--spectrum", gen_spectrum,
                  "powerlaw:<exp> | flat | hard:k,r,eta[,lambda]")
      ->required();
  gen->add_option("--seed", seed, "rng seed");
  gen->add_option("--out", out, "output .grdf path")->required();

  // fisher
  std::string in_path;
  double rank_tol = 1e-10;
  Index fisher_cap = kKronDenseCap;
  auto* fisher =
      app.add_subcommand("fisher", "empirical Fisher eigendecomposition");
  fisher->add_option("--in", in_path, "input .grdf")->required();
  fisher->add_option("--out", out, "output .ceig path")->required();
  fisher->add_option("--rank-tol", rank_tol, "relative rank cutoff");
  fisher->add_option("--cap", fisher_cap, "max dense dimension");

  // kfac-load
  auto* kfac = app.add_subcommand("kfac-load",
                                  "load K-FAC factors and cache their eigs");
  kfac->add_option("--in", in_path, "input .kfcf")->required();
  kfac->add_option("--out", out, "output .keig path")->required();
  kfac->add_option("--rank-tol", rank_tol, "relative rank cutoff");

  // plan
  std::string curv_path;
  bool factorized = false;
  auto* plan = app.add_subcommand("plan", "recommend sketch sizes");
  plan->add_option("--curv", curv_path, "curvature artifact")->required();
  plan->add_option("--lambda", lambda, "ridge parameter")->required();
  plan->add_option("--eps", eps, "target accuracy in (0,1)");
  plan->add_option("--delta", delta, "failure probability in (0,1)");
  plan->add_option("--C", calibration_c, "calibration constant");
  plan->add_flag("--factorized", factorized, "factor-level plan (KEIG)");
  plan->add_option("--out", out, "write JSON here instead of stdout");

  // attribute
  std::string train_path, test_path;
  auto* attribute =
      app.add_subcommand("attribute", "pairwise influence scores");
  attribute->add_option("--curv", curv_path, "curvature artifact")
      ->required();
  attribute->add_option("--train", train_path, "training gradients .grdf")
      ->required();
  attribute->add_option("--test", test_path, "test gradients .grdf")
      ->required();
  attribute->add_option("--lambda", lambda, "ridge parameter")->required();
  attribute->add_option("--sketch", sketch_family,
                        "gaussian | rademacher | sjl:<s> | kron:<fA>x<fE>");
  attribute->add_option("--m", m, "sketch size");
  attribute->add_option("--m-a", m_a, "factor sketch size (A)");
  attribute->add_option("--m-e", m_e, "factor sketch size (E)");
  attribute->add_option("--seed", seed, "rng seed");
  attribute->add_option("--out", out, "output csv")->required();

  // sweep
  std::string lambdas_text, mults_text;
  Index pairs = 200;
  bool timing = false;
  auto* sweep = app.add_subcommand(
      "sweep", "normalized-error sweep over lambda and sketch size");
  sweep->add_option("--curv", curv_path, "curvature artifact (.ceig)")
      ->required();
  sweep->add_option("--lambdas", lambdas_text, "comma list of lambdas")
      ->required();
  sweep->add_option("--m-mults", mults_text,
                    "comma list of m/d_lambda multipliers")
      ->required();
  sweep->add_option("--trials", trials, "sketch draws per cell");
  sweep->add_option("--pairs", pairs, "gradient pairs per cell");
  sweep->add_option("--seed", seed, "rng seed");
  sweep->add_option("--sketch", sketch_family, "sketch family")
      ->default_val("gaussian");
  sweep->add_option("--train", train_path,
                    "sample pairs from these gradient rows");
  sweep->add_option("--threads", threads, "worker threads (0 = auto)");
  sweep->add_flag("--timing", timing,
                  "record wall time per cell (breaks byte-stability)");
  sweep->add_option("--out", out, "output csv")->required();

  // verify
  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "run the probe suites");
  verify->add_option("--suite", suite,
                     "all|barrier|sandwich|lower|anti|kfac|leakage");
  verify->add_option("--seed", seed, "base seed");
  verify->add_option("--threads", threads, "worker threads (0 = auto)");
  verify->add_option("--out", out, "write JSON here instead of stdout");

  // spectrum
  auto* spectrum = app.add_subcommand(
      "spectrum", "ordered eigenvalues and the d_lambda curve");
  spectrum->add_option("--curv", curv_path, "curvature artifact")->required();
  spectrum->add_option("--out", out, "output csv")->required();

  // leakage
  Index train_idx = 0;
  auto* leakage =
      app.add_subcommand("leakage", "out-of-range leakage report");
  leakage->add_option("--curv", curv_path, "curvature artifact")->required();
  leakage->add_option("--train", train_path, "training gradients .grdf")
      ->required();
  leakage->add_option("--test", test_path, "test gradients .grdf")
      ->required();
  leakage->add_option("--lambda", lambda, "ridge parameter")->required();
  leakage->add_option("--train-idx", train_idx, "training row for g");
  leakage->add_option("--sketch", sketch_family, "sketch family")
      ->default_val("gaussian");
  leakage->add_option("--m", m, "sketch size");
  leakage->add_option("--m-a", m_a, "factor sketch size (A)");
  leakage->add_option("--m-e", m_e, "factor sketch size (E)");
  leakage->add_option("--eps", eps, "epsilon for the closed-form bounds")
      ->default_val(0.0);
  leakage->add_option("--delta", delta, "failure probability");
  leakage->add_option("--C", calibration_c, "calibration constant");
  leakage->add_option("--seed", seed, "rng seed");
  leakage->add_option("--out", out, "output csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_n, gen_d, gen_spectrum, seed, out);
    if (fisher->parsed()) return cmd_fisher(in_path, out, rank_tol, fisher_cap);
    if (kfac->parsed()) return cmd_kfac_load(in_path, out, rank_tol);
    if (plan->parsed()) {
      return cmd_plan(curv_path, lambda, eps, delta, calibration_c,
                      factorized, out);
    }
    if (attribute->parsed()) {
      return cmd_attribute(curv_path, train_path, test_path, lambda,
                           sketch_family, m, m_a, m_e, seed, out);
    }
    if (sweep->parsed()) {
      return cmd_sweep(curv_path, lambdas_text, mults_text, trials, pairs,
                       seed, sketch_family, train_path, threads, timing, out);
    }
    if (verify->parsed()) return cmd_verify(suite, seed, threads, out);
    if (spectrum->parsed()) return cmd_spectrum(curv_path, out);
    if (leakage->parsed()) {
      return cmd_leakage(curv_path, train_path, test_path, lambda, train_idx,
                         sketch_family, m, m_a, m_e, eps, delta,
                         calibration_c, seed, out);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const OutOfRangeParamError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidParamsError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidSpecError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
