// Command-line surface: dataset synthesis, factorization, baselines,
// benchmark sweeps, the KRR pipeline, and the harmonic-spectrum diagnostic.
// All commands are deterministic given --seed (timing columns excepted;
// --no-timing zeroes them for byte-reproducible output).

#include <CLI11.hpp>
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include "hdf/baselines.hpp"
#include "hdf/csv.hpp"
#include "hdf/factorization.hpp"
#include "hdf/krr.hpp"
#include "hdf/rng.hpp"

using namespace hdf;

namespace {

struct Common {
  std::uint64_t seed = 0;
  int threads = 1;
  bool no_timing = false;
  std::string kernel = "cauchy";
  double sigma = 1.0;
};

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

IsotropicKernel make_kernel(const Common& c) {
  return IsotropicKernel(kernel_family_from_string(c.kernel), c.sigma);
}

Matrix synth_points(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  return synthetic_normal_points(n, d, seed);
}

Matrix load_points(const std::string& path) {
  CsvTable t = read_csv(path);
  if (t.data.rows() == 0) throw invalid_input("points file " + path + " is empty");
  return t.data;
}

double masked(double ms, const Common& c) { return c.no_timing ? 0.0 : ms; }

TauMode parse_mode(const std::string& m) {
  if (m == "strict") return TauMode::strict;
  if (m == "practical") return TauMode::practical;
  throw invalid_input("--mode must be strict or practical");
}

void log_config(const std::string& line) { std::cerr << "config: " << line << "\n"; }

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---------------------------------------------------------------- synth
int cmd_synth(const Common& c, Eigen::Index n, Eigen::Index d, const std::string& out) {
  log_config("synth n=" + std::to_string(n) + " d=" + std::to_string(d) +
             " seed=" + std::to_string(c.seed) + " out=" + out);
  Matrix X = synth_points(n, d, c.seed);
  std::vector<std::string> hdr(d);
  for (Eigen::Index j = 0; j < d; ++j) hdr[j] = "x" + std::to_string(j);
  write_csv(out, hdr, X);
  return 0;
}

// ---------------------------------------------------------------- factor
int cmd_factor(const Common& c, const std::string& points, const std::string& points_y,
               double eps, const std::string& mode, const std::string& out,
               const std::string& err_mode, std::size_t sample) {
  Matrix X = load_points(points);
  Matrix Y = points_y.empty() ? Matrix() : load_points(points_y);
  IsotropicKernel k = make_kernel(c);
  FactorOptions fo;
  fo.mode = parse_mode(mode);
  fo.threads = c.threads;
  log_config("factor kernel=" + c.kernel + " sigma=" + format_g17(c.sigma) +
             " eps=" + format_g17(eps) + " mode=" + mode + " n=" + std::to_string(X.rows()) +
             " m=" + std::to_string(Y.rows()) + " d=" + std::to_string(X.cols()) +
             " threads=" + std::to_string(c.threads));

  const double t0 = now_ms();
  LowRankFactorization f = Y.rows() ? factor(k, eps, X, Y, fo) : factor_sym(k, eps, X, fo);
  const double ms = now_ms() - t0;
  save_factorization(f, out);

  const std::size_t total = static_cast<std::size_t>(X.rows()) *
                            static_cast<std::size_t>(Y.rows() ? Y.rows() : X.rows());
  ErrorMode em = err_mode == "exact" ? ErrorMode::exact : ErrorMode::sampled;
  if (em == ErrorMode::exact && total > 40000000) em = ErrorMode::sampled;
  const double rel = relative_error(f, k, X, Y, em, sample, c.seed, c.threads);

  Matrix row(1, 9);
  row << static_cast<double>(X.rows()), static_cast<double>(Y.rows() ? Y.rows() : X.rows()),
      static_cast<double>(f.d), eps, static_cast<double>(f.p), static_cast<double>(f.rank),
      f.budget.tau, rel, masked(ms, c);
  std::cout << "n,m,d,eps,p,rank,tau,rel_error,time_ms\n";
  for (int j = 0; j < 9; ++j) std::cout << (j ? "," : "") << format_g17(row(0, j));
  std::cout << "\n";
  return 0;
}

// ---------------------------------------------------------------- matvec
int cmd_matvec(const Common& c, const std::string& in, const std::string& vec,
               const std::string& out) {
  LowRankFactorization f = load_factorization(in);
  Vector w;
  if (!vec.empty()) {
    CsvTable t = read_csv(vec);
    if (t.data.cols() != 1) throw invalid_input("matvec: vector file must have a single column");
    w = t.data.col(0);
  } else {
    Rng rng(c.seed);
    w.resize(f.cols_in());
    for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = rng.normal();
  }
  log_config("matvec in=" + in + " len=" + std::to_string(w.size()));
  Vector y = matvec(f, w);
  write_csv(out, {"y"}, y);
  return 0;
}

// ---------------------------------------------------------------- nystrom
int cmd_nystrom(const Common& c, const std::string& points, Eigen::Index n, Eigen::Index d,
                std::size_t rank, const std::string& out) {
  Matrix X = points.empty() ? synth_points(n, d, c.seed) : load_points(points);
  IsotropicKernel k = make_kernel(c);
  log_config("nystrom kernel=" + c.kernel + " rank=" + std::to_string(rank) +
             " n=" + std::to_string(X.rows()) + " seed=" + std::to_string(c.seed));
  const double t0 = now_ms();
  NystromFactorization nf(k, X, rank, c.seed);
  const double ms = now_ms() - t0;
  std::cerr << "nystrom core jitter used: " << format_g17(nf.core_jitter()) << "\n";

  double rel;
  const std::size_t total =
      static_cast<std::size_t>(X.rows()) * static_cast<std::size_t>(X.rows());
  if (total <= 40000000) {
    Matrix K = dense_kernel_matrix(k, X, Matrix(), c.threads);
    rel = (nf.reconstruct() - K).norm() / K.norm();
  } else {
    // sampled estimate: reconstruction columns against the kernel oracle
    Rng prng(c.seed + 5);
    double num = 0.0, den = 0.0;
    for (int s = 0; s < 256; ++s) {
      const Eigen::Index j =
          static_cast<Eigen::Index>(prng.below(static_cast<std::uint64_t>(X.rows())));
      Vector ej = Vector::Zero(X.rows());
      ej[j] = 1.0;
      Vector col = nf.apply(ej);
      for (int probe = 0; probe < 64; ++probe) {
        const Eigen::Index i =
            static_cast<Eigen::Index>(prng.below(static_cast<std::uint64_t>(X.rows())));
        const double kij = k((X.row(i) - X.row(j)).norm());
        num += (kij - col[i]) * (kij - col[i]);
        den += kij * kij;
      }
    }
    rel = den > 0 ? std::sqrt(num / den) : 0.0;
  }
  Matrix row(1, 4);
  row << static_cast<double>(X.rows()), static_cast<double>(rank), rel, masked(ms, c);
  if (out.empty()) {
    std::cout << "n,rank,rel_error,time_ms\n";
    for (int j = 0; j < 4; ++j) std::cout << (j ? "," : "") << format_g17(row(0, j));
    std::cout << "\n";
  } else {
    write_csv(out, {"n", "rank", "rel_error", "time_ms"}, row);
  }
  return 0;
}

// ---------------------------------------------------------------- bench-rank
int cmd_bench_rank(const Common& c, const std::string& points, Eigen::Index n, Eigen::Index d,
                   std::vector<std::string> kernels, std::vector<double> eps_list,
                   const std::string& mode, const std::string& out) {
  if (kernels.empty()) kernels = {"cauchy", "gaussian", "matern15", "matern25"};
  if (eps_list.empty()) eps_list = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  Matrix X = points.empty() ? synth_points(n, d, c.seed) : load_points(points);
  log_config("bench-rank n=" + std::to_string(X.rows()) + " d=" + std::to_string(X.cols()) +
             " seed=" + std::to_string(c.seed) + " mode=" + mode);

  // method ids: 0 = hdf, 1 = nystrom (best of 3 seeds), 2 = svd oracle
  std::vector<std::array<double, 6>> rows;
  for (std::size_t ki = 0; ki < kernels.size(); ++ki) {
    Common ck = c;
    ck.kernel = kernels[ki];
    IsotropicKernel k = make_kernel(ck);
    Matrix K = dense_kernel_matrix(k, X, Matrix(), c.threads);
    const double knorm = K.norm();
    Vector sv = singular_values(K);
    for (double eps : eps_list) {
      FactorOptions fo;
      fo.mode = parse_mode(mode);
      fo.threads = c.threads;
      double t0 = now_ms();
      LowRankFactorization f;
      try {
        f = factor_sym(k, eps, X, fo);
      } catch (const tolerance_unreachable&) {
        continue;  // eps not attainable for this kernel; skip the sweep point
      }
      const double hdf_ms = now_ms() - t0;
      Matrix A = f.rank ? Matrix(f.U * f.D.asDiagonal() * f.U.transpose())
                        : Matrix::Zero(K.rows(), K.cols());
      const double hdf_rel = (K - A).norm() / knorm;
      rows.push_back({static_cast<double>(ki), 0.0, eps, static_cast<double>(f.rank), hdf_rel,
                      masked(hdf_ms, c)});

      const std::size_t r = std::max<std::size_t>(
          1, std::min<std::size_t>(f.rank, static_cast<std::size_t>(X.rows())));
      double best = std::numeric_limits<double>::infinity(), best_ms = 0.0;
      for (std::uint64_t s = 0; s < 3; ++s) {
        t0 = now_ms();
        NystromFactorization nf(k, X, r, c.seed + 1000 * s + 17 * ki);
        const double nys_ms = now_ms() - t0;
        const double rel = (nf.reconstruct() - K).norm() / knorm;
        if (rel < best) {
          best = rel;
          best_ms = nys_ms;
        }
      }
      rows.push_back(
          {static_cast<double>(ki), 1.0, eps, static_cast<double>(r), best, masked(best_ms, c)});

      double tail = 0.0;
      for (Eigen::Index i = static_cast<Eigen::Index>(r); i < sv.size(); ++i)
        tail += sv[i] * sv[i];
      rows.push_back({static_cast<double>(ki), 2.0, eps, static_cast<double>(r),
                      std::sqrt(tail) / knorm, 0.0});
    }
  }
  Matrix M(static_cast<Eigen::Index>(rows.size()), 6);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < 6; ++j) M(static_cast<Eigen::Index>(i), j) = rows[i][j];
  write_csv(out, {"kernel_id", "method_id", "eps", "rank", "rel_error", "time_ms"}, M);
  return 0;
}

// ---------------------------------------------------------------- bench-time
int cmd_bench_time(const Common& c, std::vector<Eigen::Index> ns, std::vector<Eigen::Index> ds,
                   double eps, int trials, const std::string& out) {
  if (ns.empty()) ns = {10000, 20000, 40000, 80000};
  if (ds.empty()) ds = {3};
  std::sort(ns.begin(), ns.end());
  std::sort(ds.begin(), ds.end());
  IsotropicKernel k = make_kernel(c);
  log_config("bench-time kernel=" + c.kernel + " eps=" + format_g17(eps) +
             " trials=" + std::to_string(trials) + " threads=" + std::to_string(c.threads));
  FactorOptions fo;
  fo.mode = TauMode::practical;
  fo.threads = c.threads;
  std::vector<std::array<double, 3>> rows;
  for (Eigen::Index d : ds) {
    for (Eigen::Index n : ns) {
      Matrix X = synth_points(n, d, c.seed + static_cast<std::uint64_t>(n) + 31 * d);
      factor_sym(k, eps, X, fo);  // warmup, discarded
      double total = 0.0;
      for (int t = 0; t < trials; ++t) {
        const double t0 = now_ms();
        LowRankFactorization f = factor_sym(k, eps, X, fo);
        total += now_ms() - t0;
      }
      rows.push_back(
          {static_cast<double>(d), static_cast<double>(n), masked(total / trials, c)});
    }
  }
  Matrix M(static_cast<Eigen::Index>(rows.size()), 3);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < 3; ++j) M(static_cast<Eigen::Index>(i), j) = rows[i][j];
  write_csv(out, {"d", "n", "time_ms"}, M);
  return 0;
}

// ---------------------------------------------------------------- bench-errtime
int cmd_bench_errtime(const Common& c, Eigen::Index n, Eigen::Index d,
                      std::vector<double> eps_list, std::vector<std::size_t> ranks,
                      std::size_t sample, const std::string& out) {
  if (eps_list.empty()) eps_list = {3e-2, 1e-2, 3e-3, 1e-3, 3e-4};
  if (ranks.empty()) ranks = {16, 32, 64, 128, 256};
  Matrix X = synth_points(n, d, c.seed);
  IsotropicKernel k = make_kernel(c);
  log_config("bench-errtime kernel=" + c.kernel + " n=" + std::to_string(n) +
             " d=" + std::to_string(d) + " sample=" + std::to_string(sample));
  Rng rng(c.seed + 99);
  Vector w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = rng.normal();

  std::vector<std::array<double, 6>> rows;  // method, param, rank, rel, factor_ms, matvec_ms
  FactorOptions fo;
  fo.mode = TauMode::practical;
  fo.threads = c.threads;
  for (double eps : eps_list) {
    double t0 = now_ms();
    LowRankFactorization f;
    try {
      f = factor_sym(k, eps, X, fo);
    } catch (const tolerance_unreachable&) {
      continue;
    }
    const double fms = now_ms() - t0;
    t0 = now_ms();
    Vector y = matvec(f, w);
    const double mms = now_ms() - t0;
    const double rel =
        relative_error(f, k, X, Matrix(), ErrorMode::sampled, sample, c.seed + 1, c.threads);
    rows.push_back({0.0, eps, static_cast<double>(f.rank), rel, masked(fms, c), masked(mms, c)});
  }
  for (std::size_t r : ranks) {
    if (r > static_cast<std::size_t>(n)) continue;
    double t0 = now_ms();
    NystromFactorization nf(k, X, r, c.seed + 3);
    const double fms = now_ms() - t0;
    t0 = now_ms();
    Vector y = nf.apply(w);
    const double mms = now_ms() - t0;
    // sampled relative error, entries taken column-at-a-time from the oracle
    Rng prng(c.seed + 4);
    double num = 0.0, den = 0.0;
    const std::size_t nys_sample = std::min<std::size_t>(sample, 512);
    for (std::size_t s = 0; s < nys_sample; ++s) {
      const Eigen::Index j = static_cast<Eigen::Index>(prng.below(n));
      Vector ej = Vector::Zero(n);
      ej[j] = 1.0;
      Vector col = nf.apply(ej);
      for (int probe = 0; probe < 64; ++probe) {
        const Eigen::Index i = static_cast<Eigen::Index>(prng.below(n));
        const double kij = k((X.row(i) - X.row(j)).norm());
        num += (kij - col[i]) * (kij - col[i]);
        den += kij * kij;
      }
    }
    rows.push_back({1.0, static_cast<double>(r), static_cast<double>(r),
                    den > 0 ? std::sqrt(num / den) : 0.0, masked(fms, c), masked(mms, c)});
  }
  Matrix M(static_cast<Eigen::Index>(rows.size()), 6);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < 6; ++j) M(static_cast<Eigen::Index>(i), j) = rows[i][j];
  write_csv(out, {"method_id", "param", "rank", "rel_error", "factor_ms", "matvec_ms"}, M);
  return 0;
}

// ---------------------------------------------------------------- krr
struct KrrReportRow {
  std::string kernel, method;
  double med, lo, hi;
  bool all_converged;
};

int cmd_krr(const Common& c, const std::string& points, int labels_col, Eigen::Index n,
            Eigen::Index d, double lambda, double eps, int clusters, int trials,
            bool precond_lambda, const std::string& out, const std::string& block_out) {
  Matrix feats;
  Vector labels;
  if (!points.empty()) {
    CsvTable t = read_csv(points);
    const Eigen::Index cols = t.data.cols();
    if (cols < 2) throw invalid_input("krr: need at least one feature and one label column");
    Eigen::Index lc = labels_col < 0 ? cols - 1 : labels_col;
    if (lc >= cols) throw invalid_input("krr: label column out of range");
    labels = t.data.col(lc);
    feats.resize(t.data.rows(), cols - 1);
    Eigen::Index w = 0;
    for (Eigen::Index j = 0; j < cols; ++j)
      if (j != lc) feats.col(w++) = t.data.col(j);
  } else {
    // synthetic regression surrogate: smooth function of the features + noise
    feats = synth_points(n, d, c.seed);
    Rng noise(c.seed + 1);
    labels.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& x = feats.row(i);
      labels[i] = std::sin(3.0 * x[0]) + 0.5 * std::cos(2.0 * x[1]) + 0.25 * x[2] * x[2] +
                  0.05 * noise.normal();
    }
  }
  if (feats.cols() < 3) throw unsupported_dimension("krr: needs d >= 3 features");

  // min-max scale features to [0,1]; labels left unscaled
  for (Eigen::Index j = 0; j < feats.cols(); ++j) {
    const double lo = feats.col(j).minCoeff(), hi = feats.col(j).maxCoeff();
    if (hi > lo) feats.col(j) = (feats.col(j).array() - lo) / (hi - lo);
  }

  const Eigen::Index N = feats.rows();
  const Eigen::Index ntrain = (2 * N) / 3;
  const double lam = lambda > 0 ? lambda : 1e-3 * static_cast<double>(ntrain);
  log_config("krr n=" + std::to_string(N) + " d=" + std::to_string(feats.cols()) +
             " lambda=" + format_g17(lam) + " eps=" + format_g17(eps) +
             " clusters=" + std::to_string(clusters) + " trials=" + std::to_string(trials) +
             " precond_lambda=" + (precond_lambda ? std::string("on") : std::string("off")) +
             " seed=" + std::to_string(c.seed));

  const std::vector<std::string> kernel_names = {"cauchy", "gaussian", "matern15", "matern25"};
  std::vector<KrrReportRow> report;
  std::vector<std::array<double, 7>> block_rows;  // kernel, trial, block, size, rank, hdf, nys

  for (std::size_t ki = 0; ki < kernel_names.size(); ++ki) {
    IsotropicKernel k(kernel_family_from_string(kernel_names[ki]), c.sigma);
    std::vector<double> mse_dense, mse_hdf, mse_nys;
    bool conv_dense = true, conv_hdf = true, conv_nys = true;
    for (int trial = 0; trial < trials; ++trial) {
      // seeded shuffle then 2/3 - 1/3 split
      std::vector<int> perm(static_cast<std::size_t>(N));
      for (Eigen::Index i = 0; i < N; ++i)
        perm[static_cast<std::size_t>(i)] = static_cast<int>(i);
      Rng shuffler(c.seed + 104729ull * static_cast<std::uint64_t>(trial + 1));
      shuffler.shuffle(perm);
      Matrix Xtr(ntrain, feats.cols()), Xte(N - ntrain, feats.cols());
      Vector ytr(ntrain), yte(N - ntrain);
      for (Eigen::Index i = 0; i < ntrain; ++i) {
        Xtr.row(i) = feats.row(perm[static_cast<std::size_t>(i)]);
        ytr[i] = labels[perm[static_cast<std::size_t>(i)]];
      }
      for (Eigen::Index i = ntrain; i < N; ++i) {
        Xte.row(i - ntrain) = feats.row(perm[static_cast<std::size_t>(i)]);
        yte[i - ntrain] = labels[perm[static_cast<std::size_t>(i)]];
      }

      KrrOptions base;
      base.lambda = lam;
      base.eps = eps;
      base.clusters = clusters;
      base.precond_lambda = precond_lambda;
      base.seed = c.seed + 15485863ull * static_cast<std::uint64_t>(trial + 1);
      base.threads = c.threads;

      KrrOptions od = base;
      od.method = KrrMethod::dense;
      KrrModel md = fit(k, Xtr, ytr, od);
      conv_dense = conv_dense && md.converged;

      KrrOptions oh = base;
      oh.method = KrrMethod::hdf;
      KrrModel mh = fit(k, Xtr, ytr, oh);
      conv_hdf = conv_hdf && mh.converged;

      KrrOptions on = base;
      on.method = KrrMethod::nystrom;
      on.nystrom_ranks = mh.block_ranks;  // matched per-block ranks
      KrrModel mn = fit(k, Xtr, ytr, on);
      conv_nys = conv_nys && mn.converged;

      mse_dense.push_back(mse(predict(md, k, Xtr, Xte, c.threads), yte));
      mse_hdf.push_back(mse(predict(mh, k, Xtr, Xte, c.threads), yte));
      mse_nys.push_back(mse(predict(mn, k, Xtr, Xte, c.threads), yte));

      for (std::size_t b = 0; b < mh.block_ranks.size(); ++b)
        block_rows.push_back({static_cast<double>(ki), static_cast<double>(trial),
                              static_cast<double>(b),
                              static_cast<double>(mh.clusters.members[b].size()),
                              static_cast<double>(mh.block_ranks[b]), mh.block_rel_errors[b],
                              mn.block_rel_errors[b]});
    }
    auto push = [&](const std::string& method, std::vector<double>& v, bool conv) {
      report.push_back({kernel_names[ki], method, median_of(v),
                        *std::min_element(v.begin(), v.end()),
                        *std::max_element(v.begin(), v.end()), conv});
    };
    push("dense", mse_dense, conv_dense);
    push("hdf", mse_hdf, conv_hdf);
    push("nystrom", mse_nys, conv_nys);
  }

  // human-readable table on stderr; stdout/files stay machine-parsable
  std::cerr << "\nkernel      method    median MSE [min, max]  converged\n";
  for (const auto& r : report)
    std::cerr << r.kernel << std::string(12 - r.kernel.size(), ' ') << r.method
              << std::string(10 - r.method.size(), ' ') << format_g17(r.med) << " ["
              << format_g17(r.lo) << ", " << format_g17(r.hi) << "] "
              << (r.all_converged ? "yes" : "NO") << "\n";

  Matrix M(static_cast<Eigen::Index>(report.size()), 6);
  for (std::size_t i = 0; i < report.size(); ++i) {
    const auto& r = report[i];
    const double method_id = r.method == "dense" ? 0.0 : (r.method == "hdf" ? 1.0 : 2.0);
    M(static_cast<Eigen::Index>(i), 0) = static_cast<double>(
        std::find(kernel_names.begin(), kernel_names.end(), r.kernel) - kernel_names.begin());
    M(static_cast<Eigen::Index>(i), 1) = method_id;
    M(static_cast<Eigen::Index>(i), 2) = r.med;
    M(static_cast<Eigen::Index>(i), 3) = r.lo;
    M(static_cast<Eigen::Index>(i), 4) = r.hi;
    M(static_cast<Eigen::Index>(i), 5) = r.all_converged ? 1.0 : 0.0;
  }
  write_csv(out, {"kernel_id", "method_id", "mse_median", "mse_min", "mse_max", "converged"}, M);

  if (!block_out.empty()) {
    Matrix B(static_cast<Eigen::Index>(block_rows.size()), 7);
    for (std::size_t i = 0; i < block_rows.size(); ++i)
      for (int j = 0; j < 7; ++j) B(static_cast<Eigen::Index>(i), j) = block_rows[i][j];
    write_csv(
        block_out,
        {"kernel_id", "trial", "block", "size", "rank", "rel_error_hdf", "rel_error_nystrom"},
        B);
  }
  return 0;
}

// ---------------------------------------------------------------- diag-harmonics
int cmd_diag(const Common& c, std::vector<Eigen::Index> ds, std::vector<int> ks, Eigen::Index n,
             const std::string& out) {
  if (ds.empty()) ds = {3, 20};
  if (ks.empty()) ks = {0, 2};
  log_config("diag-harmonics n=" + std::to_string(n) + " seed=" + std::to_string(c.seed));
  std::vector<std::array<double, 4>> rows;
  for (Eigen::Index d : ds) {
    Matrix X(n, d);
    Rng rng(c.seed + 53ull * static_cast<std::uint64_t>(d));
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < d; ++j) X(i, j) = rng.normal();
    for (int k : ks) {
      Vector sv = harmonic_gram_spectrum(X, k);
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        rows.push_back(
            {static_cast<double>(d), static_cast<double>(k), static_cast<double>(i), sv[i]});
    }
  }
  Matrix M(static_cast<Eigen::Index>(rows.size()), 4);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < 4; ++j) M(static_cast<Eigen::Index>(i), j) = rows[i][j];
  write_csv(out, {"d", "k", "index", "sigma"}, M);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonic decomposition low-rank kernel factorization toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand name

  Common c;
  app.add_option("--seed", c.seed, "RNG seed (all commands deterministic given it)");
  app.add_option("--threads", c.threads, "worker threads (1 = serial)");
  app.add_flag("--no-timing", c.no_timing, "write 0 for timing fields (byte-reproducible)");

  auto* synth = app.add_subcommand("synth", "generate normal points scaled to max norm 1");
  Eigen::Index s_n = 1000, s_d = 3;
  std::string s_out;
  synth->add_option("--n", s_n);
  synth->add_option("--d", s_d);
  synth->add_option("--out", s_out)->required();

  auto* fac = app.add_subcommand("factor", "build a low-rank kernel factorization");
  std::string f_points, f_points_y, f_mode = "practical", f_out, f_err = "sampled";
  double f_eps = 1e-3;
  std::size_t f_sample = 1 << 20;
  fac->add_option("--points", f_points)->required();
  fac->add_option("--points-y", f_points_y, "second dataset (rectangular problem)");
  fac->add_option("--kernel", c.kernel);
  fac->add_option("--sigma", c.sigma);
  fac->add_option("--eps", f_eps);
  fac->add_option("--mode", f_mode, "strict|practical");
  fac->add_option("--error", f_err, "exact|sampled");
  fac->add_option("--sample", f_sample);
  fac->add_option("--out", f_out)->required();

  auto* mv = app.add_subcommand("matvec", "apply a stored factorization to a vector");
  std::string m_in, m_vec, m_out;
  mv->add_option("--in", m_in)->required();
  mv->add_option("--vec", m_vec, "single-column CSV (default: seeded normal vector)");
  mv->add_option("--out", m_out)->required();

  auto* ny = app.add_subcommand("nystrom", "uniform-sampling Nystrom baseline");
  std::string n_points, n_out;
  Eigen::Index n_n = 2000, n_d = 3;
  std::size_t n_rank = 64;
  ny->add_option("--points", n_points);
  ny->add_option("--n", n_n);
  ny->add_option("--d", n_d);
  ny->add_option("--kernel", c.kernel);
  ny->add_option("--sigma", c.sigma);
  ny->add_option("--rank", n_rank);
  ny->add_option("--out", n_out);

  auto* br = app.add_subcommand("bench-rank", "rank/error sweep: hdf vs nystrom vs svd");
  std::string br_points, br_mode = "practical", br_out;
  Eigen::Index br_n = 5000, br_d = 5;
  std::vector<std::string> br_kernels;
  std::vector<double> br_eps;
  br->add_option("--points", br_points);
  br->add_option("--n", br_n);
  br->add_option("--d", br_d);
  br->add_option("--kernel", br_kernels, "kernels to sweep (default: all four)");
  br->add_option("--sigma", c.sigma);
  br->add_option("--eps", br_eps, "eps grid");
  br->add_option("--mode", br_mode);
  br->add_option("--out", br_out)->required();

  auto* bt = app.add_subcommand("bench-time", "factorization time vs dataset size");
  std::vector<Eigen::Index> bt_ns, bt_ds;
  double bt_eps = 1e-3;
  int bt_trials = 10;
  std::string bt_out;
  bt->add_option("--n", bt_ns, "dataset sizes");
  bt->add_option("--d", bt_ds, "dimensions");
  bt->add_option("--kernel", c.kernel);
  bt->add_option("--sigma", c.sigma);
  bt->add_option("--eps", bt_eps);
  bt->add_option("--trials", bt_trials);
  bt->add_option("--out", bt_out)->required();

  auto* be = app.add_subcommand("bench-errtime", "time/error tradeoff: hdf vs nystrom");
  Eigen::Index be_n = 10000, be_d = 3;
  std::vector<double> be_eps;
  std::vector<std::size_t> be_ranks;
  std::size_t be_sample = 1 << 20;
  std::string be_out;
  be->add_option("--n", be_n);
  be->add_option("--d", be_d);
  be->add_option("--kernel", c.kernel);
  be->add_option("--sigma", c.sigma);
  be->add_option("--eps", be_eps);
  be->add_option("--rank", be_ranks);
  be->add_option("--sample", be_sample);
  be->add_option("--out", be_out)->required();

  auto* kr = app.add_subcommand("krr", "kernel ridge regression pipeline (all four kernels)");
  std::string k_points, k_out, k_block_out, k_precond = "on";
  int k_labels = -1, k_clusters = 30, k_trials = 5;
  Eigen::Index k_n = 4000, k_d = 8;
  double k_lambda = -1.0, k_eps = 1e-3;
  kr->add_option("--points", k_points, "CSV dataset (default: synthetic regression)");
  kr->add_option("--labels-col", k_labels, "label column index (default: last)");
  kr->add_option("--n", k_n);
  kr->add_option("--d", k_d);
  kr->add_option("--sigma", c.sigma);
  kr->add_option("--lambda", k_lambda, "regularization (default 1e-3 * n_train)");
  kr->add_option("--eps", k_eps);
  kr->add_option("--clusters", k_clusters);
  kr->add_option("--trials", k_trials);
  kr->add_option("--precond-lambda", k_precond, "on|off: include lambda in preconditioner");
  kr->add_option("--out", k_out)->required();
  kr->add_option("--block-out", k_block_out);

  auto* dh = app.add_subcommand("diag-harmonics", "harmonic Gram spectra per (d, k)");
  std::vector<Eigen::Index> dh_ds;
  std::vector<int> dh_ks;
  Eigen::Index dh_n = 500;
  std::string dh_out;
  dh->add_option("--d", dh_ds);
  dh->add_option("--k", dh_ks);
  dh->add_option("--n", dh_n);
  dh->add_option("--out", dh_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help path
    app.exit(e);
    return 2;
  }

  try {
    if (*synth) return cmd_synth(c, s_n, s_d, s_out);
    if (*fac) return cmd_factor(c, f_points, f_points_y, f_eps, f_mode, f_out, f_err, f_sample);
    if (*mv) return cmd_matvec(c, m_in, m_vec, m_out);
    if (*ny) return cmd_nystrom(c, n_points, n_n, n_d, n_rank, n_out);
    if (*br) return cmd_bench_rank(c, br_points, br_n, br_d, br_kernels, br_eps, br_mode, br_out);
    if (*bt) return cmd_bench_time(c, bt_ns, bt_ds, bt_eps, bt_trials, bt_out);
    if (*be) return cmd_bench_errtime(c, be_n, be_d, be_eps, be_ranks, be_sample, be_out);
    if (*kr)
      return cmd_krr(c, k_points, k_labels, k_n, k_d, k_lambda, k_eps, k_clusters, k_trials,
                     k_precond != "off", k_out, k_block_out);
    if (*dh) return cmd_diag(c, dh_ds, dh_ks, dh_n, dh_out);
  } catch (const tolerance_unreachable& e) {
    std::cerr << "error (tolerance unreachable): " << e.what() << "\n";
    return 4;
  } catch (const invalid_input& e) {
    std::cerr << "error (invalid input): " << e.what() << "\n";
    return 2;
  } catch (const numeric_failure& e) {
    std::cerr << "error (numeric failure): " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
