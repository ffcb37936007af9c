#include "hdf/factorization.hpp"

#include <cmath>
#include <cstring>
#include <exception>
#include <fstream>
#include <mutex>
#include <string>

#include "hdf/rng.hpp"
#include "hdf/threading.hpp"

namespace hdf {

double choose_tau(double eps, TauMode mode, Eigen::Index N, double bound_constant) {
  if (!(eps > 0)) throw invalid_input("choose_tau: eps must be positive");
  if (mode == TauMode::practical) return eps / 2.0;
  return (eps / 2.0) / (std::sqrt(static_cast<double>(N)) * bound_constant);
}

namespace {

double bound_constant_for(int phalf, int d) {
  // sum_k binom(k+d-3,k)/Z_k == sum_k |H_k| under Z_k = C_k^a(1)/|H_k|
  double c = 0.0;
  for (int k = 0; k <= phalf; ++k) c += static_cast<double>(harmonic_count(k, d));
  return c;
}

LowRankFactorization factor_impl(const IsotropicKernel& kernel, double eps, const Matrix& X,
                                 const Matrix& Y, bool sym, const FactorOptions& opts) {
  if (!(eps > 0)) throw invalid_input("factor: eps must be positive");
  if (!(opts.cheb_split > 0 && opts.cheb_split < 1))
    throw invalid_input("factor: cheb_split must lie in (0,1)");

  ScaledProblem sp = make_scaled_problem(kernel, X, sym ? Matrix() : Y);
  const Eigen::Index N = sp.X.rows();
  const Eigen::Index M = sym ? N : sp.Y.rows();
  const int d = static_cast<int>(sp.X.cols());

  // degree selection against the Chebyshev share of the budget
  DegreeChoice dc = choose_degree(sp.kernel, 2.0 * opts.cheb_split * eps);
  const int p = dc.p;
  const int phalf = p / 2;

  ChebyshevExpansion cheb = cheb_transform(sp.kernel, p);
  ChebCoeffTable table = cheb_coeff_table(p);
  CoefficientTensor tensor = build_tensor(cheb, table, d);

  const double bconst = bound_constant_for(phalf, d);
  const double svd_eps = 2.0 * (1.0 - opts.cheb_split) * eps;
  double tau = opts.tau_override ? *opts.tau_override
                                 : choose_tau(svd_eps, opts.mode, std::max(N, M), bconst);

  Vector normsX = sp.X.rowwise().norm();
  Vector normsY = sym ? normsX : sp.Y.rowwise().norm();

  HarmonicBasis basis(d, phalf);

  // per-order compression (independent across k)
  std::vector<RadialFactors> rf(phalf + 1);
  std::exception_ptr err;
  std::mutex err_mutex;
  parallel_for(static_cast<std::size_t>(phalf) + 1, opts.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      try {
        auto [Xk, Yk] = build_radial_matrices(tensor, static_cast<int>(k), normsX, normsY);
        const double rz = std::sqrt(basis.addition_normalizer(static_cast<int>(k)));
        double tau_k = tau;
        if (!sym) {
          Xk *= rz;
          Yk *= rz;
          if (opts.relative_tau) {
            // scale the cutoff by sigma_1 of this order
            RadialFactors probe = compress_radial(Xk, Yk, 0.0);
            tau_k = probe.sigma_kept.size() ? tau * probe.sigma_kept[0] : tau;
            rf[k] = compress_radial(Xk, Yk, tau_k);
            rf[k].k = static_cast<int>(k);
            continue;
          }
          rf[k] = compress_radial(Xk, Yk, tau_k);
        } else {
          Matrix S = radial_mixing_matrix(tensor, static_cast<int>(k)) * (rz * rz);
          if (opts.relative_tau) {
            RadialFactors probe = compress_radial_sym(Yk, S, 0.0);
            tau_k = probe.sigma_kept.size() ? tau * probe.sigma_kept[0] : tau;
          }
          rf[k] = compress_radial_sym(Yk, S, tau_k);
        }
        rf[k].k = static_cast<int>(k);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mutex);
        if (!err) err = std::current_exception();
      }
    }
  });
  if (err) std::rethrow_exception(err);

  // final rank, via the counting formula (no enumeration yet)
  std::uint64_t r = 0;
  for (int k = 0; k <= phalf; ++k)
    r += harmonic_count(k, d) * static_cast<std::uint64_t>(rf[k].s_k);
  if (opts.max_rank > 0 && r > opts.max_rank)
    throw numeric_failure("factor: rank " + std::to_string(r) + " exceeds max_rank guard " +
                          std::to_string(opts.max_rank));

  LowRankFactorization out;
  out.sym = sym;
  out.rank = r;
  out.p = p;
  out.d = d;
  out.s_k.resize(phalf + 1);
  for (int k = 0; k <= phalf; ++k) out.s_k[k] = rf[k].s_k;
  out.budget = {eps, dc.tail, tau, bconst};
  out.center = sp.center;
  out.scale = sp.scale;
  out.kernel_name = to_string(kernel.family());
  out.kernel_sigma = kernel.sigma();

  out.U.resize(N, static_cast<Eigen::Index>(r));
  if (!sym)
    out.V.resize(M, static_cast<Eigen::Index>(r));
  else
    out.D.resize(static_cast<Eigen::Index>(r));

  // column offsets per order, Algorithm-1 nest: k, then h, then l
  std::vector<std::uint64_t> offset(phalf + 2, 0);
  for (int k = 0; k <= phalf; ++k)
    offset[k + 1] = offset[k] + harmonic_count(k, d) * static_cast<std::uint64_t>(rf[k].s_k);

  // force enumeration of the orders we will touch (basis cache is lazy)
  for (int k = 0; k <= phalf; ++k)
    if (rf[k].s_k > 0) basis.indices(k);

  if (sym) {
    for (int k = 0; k <= phalf; ++k) {
      if (rf[k].s_k == 0) continue;
      std::uint64_t idx = offset[k];
      const std::uint64_t nh = harmonic_count(k, d);
      for (std::uint64_t h = 0; h < nh; ++h)
        for (int l = 0; l < rf[k].s_k; ++l)
          out.D[static_cast<Eigen::Index>(idx++)] = rf[k].eigvals[l];
    }
  }

  auto fill_side = [&](const Matrix& pts, MatrixRM& dst, bool xside) {
    parallel_for(static_cast<std::size_t>(pts.rows()), opts.threads,
                 [&](std::size_t b, std::size_t e) {
      HarmonicWorkspace ws(basis);
      Vector pt(d);
      for (std::size_t i = b; i < e; ++i) {
        pt = pts.row(static_cast<Eigen::Index>(i)).transpose();
        ws.load_point(pt.data());
        double* row = dst.data() + i * static_cast<std::size_t>(r);
        for (int k = 0; k <= phalf; ++k) {
          const int sk = rf[k].s_k;
          if (sk == 0) continue;
          const Matrix& fac = xside || sym ? rf[k].Xbar : rf[k].Ybar;
          double* out_ptr = row + offset[k];
          for (const HarmonicIndex& hidx : basis.indices(k)) {
            const double hv = ws.value(hidx);
            for (int l = 0; l < sk; ++l)
              *out_ptr++ = hv * fac(static_cast<Eigen::Index>(i), l);
          }
        }
      }
    });
  };

  fill_side(sp.X, out.U, true);
  if (!sym) fill_side(sp.Y, out.V, false);
  return out;
}

}  // namespace

LowRankFactorization factor(const IsotropicKernel& kernel, double eps, const Matrix& X,
                            const Matrix& Y, const FactorOptions& opts) {
  return factor_impl(kernel, eps, X, Y, false, opts);
}

LowRankFactorization factor_sym(const IsotropicKernel& kernel, double eps, const Matrix& X,
                                const FactorOptions& opts) {
  return factor_impl(kernel, eps, X, Matrix(), true, opts);
}

Vector matvec(const LowRankFactorization& f, const Vector& w) {
  if (w.size() != f.cols_in()) throw invalid_input("matvec: vector length mismatch");
  if (f.rank == 0) return Vector::Zero(f.rows());
  if (f.sym) {
    Vector t = f.U.transpose() * w;
    t.array() *= f.D.array();
    return f.U * t;
  }
  Vector t = f.V.transpose() * w;
  return f.U * t;
}

double apriori_bound(const LowRankFactorization& f) {
  const double n = static_cast<double>(std::max(f.rows(), f.cols_in()));
  return std::sqrt(n) * f.budget.bound_constant * f.budget.tau + f.budget.eps_cheb;
}

EntrywiseError max_entrywise_error(const LowRankFactorization& f, const IsotropicKernel& kernel,
                                   const Matrix& X, const Matrix& Y, int threads) {
  const Matrix& Yr = Y.rows() ? Y : X;
  std::mutex mu;
  EntrywiseError out;
  const Eigen::Index N = X.rows(), M = Yr.rows();
  const Eigen::Index cap = std::max<Eigen::Index>(1, (1 << 22) / std::max<Eigen::Index>(1, M));
  const Eigen::Index per_thread = (N + 4 * std::max(threads, 1) - 1) / (4 * std::max(threads, 1));
  const Eigen::Index block = std::max<Eigen::Index>(1, std::min(cap, per_thread));
  const Eigen::Index nblocks = (N + block - 1) / block;
  parallel_for(static_cast<std::size_t>(nblocks), threads, [&](std::size_t bb, std::size_t eb) {
    double local_err = 0.0, local_k = 0.0;
    for (std::size_t b = bb; b < eb; ++b) {
      const Eigen::Index i0 = static_cast<Eigen::Index>(b) * block;
      const Eigen::Index rows = std::min(block, N - i0);
      Matrix A;
      if (f.rank > 0) {
        if (f.sym)
          A = f.U.middleRows(i0, rows) * f.D.asDiagonal() * f.U.transpose();
        else
          A = f.U.middleRows(i0, rows) * f.V.transpose();
      } else {
        A = Matrix::Zero(rows, M);
      }
      for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < M; ++j) {
          const double kij = kernel((X.row(i0 + i) - Yr.row(j)).norm());
          local_err = std::max(local_err, std::abs(kij - A(i, j)));
          local_k = std::max(local_k, std::abs(kij));
        }
    }
    std::lock_guard<std::mutex> lk(mu);
    out.max_abs_err = std::max(out.max_abs_err, local_err);
    out.max_abs_k = std::max(out.max_abs_k, local_k);
  });
  return out;
}

double relative_error(const LowRankFactorization& f, const IsotropicKernel& kernel,
                      const Matrix& X, const Matrix& Y, ErrorMode mode, std::size_t sample_size,
                      std::uint64_t seed, int threads) {
  const Matrix& Yr = Y.rows() ? Y : X;
  const Eigen::Index N = X.rows(), M = Yr.rows();
  const std::size_t total = static_cast<std::size_t>(N) * static_cast<std::size_t>(M);
  if (mode == ErrorMode::sampled && sample_size >= total) mode = ErrorMode::exact;
  if (mode == ErrorMode::exact) {
    if (total > std::size_t{40000000})
      throw invalid_input(
          "relative_error: N*M exceeds the exact-mode cap 4e7; use sampled mode");
    std::mutex mu;
    double num = 0.0, den = 0.0;
    const Eigen::Index cap = std::max<Eigen::Index>(1, (1 << 22) / std::max<Eigen::Index>(1, M));
    const Eigen::Index per_thread =
        (N + 4 * std::max(threads, 1) - 1) / (4 * std::max(threads, 1));
    const Eigen::Index block = std::max<Eigen::Index>(1, std::min(cap, per_thread));
    const Eigen::Index nblocks = (N + block - 1) / block;
    parallel_for(static_cast<std::size_t>(nblocks), threads, [&](std::size_t bb, std::size_t eb) {
      double lnum = 0.0, lden = 0.0;
      for (std::size_t b = bb; b < eb; ++b) {
        const Eigen::Index i0 = static_cast<Eigen::Index>(b) * block;
        const Eigen::Index rows = std::min(block, N - i0);
        Matrix A;
        if (f.rank > 0) {
          if (f.sym)
            A = f.U.middleRows(i0, rows) * f.D.asDiagonal() * f.U.transpose();
          else
            A = f.U.middleRows(i0, rows) * f.V.transpose();
        } else {
          A = Matrix::Zero(rows, M);
        }
        for (Eigen::Index i = 0; i < rows; ++i)
          for (Eigen::Index j = 0; j < M; ++j) {
            const double kij = kernel((X.row(i0 + i) - Yr.row(j)).norm());
            const double dte = kij - A(i, j);
            lnum += dte * dte;
            lden += kij * kij;
          }
      }
      std::lock_guard<std::mutex> lk(mu);
      num += lnum;
      den += lden;
    });
    return den > 0 ? std::sqrt(num / den) : 0.0;
  }
  // sampled: entry pairs drawn with replacement, seeded
  Rng rng(seed);
  double num = 0.0, den = 0.0;
  for (std::size_t s = 0; s < sample_size; ++s) {
    const Eigen::Index i = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(N)));
    const Eigen::Index j = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(M)));
    const double kij = kernel((X.row(i) - Yr.row(j)).norm());
    double aij = 0.0;
    if (f.rank > 0) {
      if (f.sym)
        aij = f.U.row(i).cwiseProduct(f.D.transpose()).dot(f.U.row(j));
      else
        aij = f.U.row(i).dot(f.V.row(j));
    }
    const double dte = kij - aij;
    num += dte * dte;
    den += kij * kij;
  }
  return den > 0 ? std::sqrt(num / den) : 0.0;
}

namespace {
void put_u64(std::ofstream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 8);
}
std::uint64_t get_u64(std::ifstream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}
void put_f64_array(std::ofstream& os, const double* p, std::size_t n) {
  static_assert(sizeof(double) == 8);
  os.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * 8));
}
void get_f64_array(std::ifstream& is, double* p, std::size_t n) {
  is.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n * 8));
}
}  // namespace

void save_factorization(const LowRankFactorization& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw invalid_input("save_factorization: cannot open " + path);
  os.write("HDF1", 4);
  put_u64(os, static_cast<std::uint64_t>(f.U.rows()));
  put_u64(os, f.sym ? 0 : static_cast<std::uint64_t>(f.V.rows()));
  put_u64(os, f.rank);
  put_u64(os, static_cast<std::uint64_t>(f.p));
  put_u64(os, static_cast<std::uint64_t>(f.d));
  put_u64(os, f.sym ? 1 : 0);
  put_f64_array(os, f.U.data(), static_cast<std::size_t>(f.U.size()));
  if (f.sym)
    put_f64_array(os, f.D.data(), static_cast<std::size_t>(f.D.size()));
  else
    put_f64_array(os, f.V.data(), static_cast<std::size_t>(f.V.size()));
  if (!os) throw invalid_input("save_factorization: write failed on " + path);
}

LowRankFactorization load_factorization(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw invalid_input("load_factorization: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "HDF1", 4) != 0)
    throw invalid_input("load_factorization: bad magic in " + path);
  const std::uint64_t N = get_u64(is), M = get_u64(is), r = get_u64(is);
  const std::uint64_t p = get_u64(is), d = get_u64(is), flags = get_u64(is);
  LowRankFactorization f;
  f.sym = (flags & 1) != 0;
  f.rank = r;
  f.p = static_cast<int>(p);
  f.d = static_cast<int>(d);
  f.U.resize(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(r));
  get_f64_array(is, f.U.data(), static_cast<std::size_t>(N * r));
  if (f.sym) {
    f.D.resize(static_cast<Eigen::Index>(r));
    get_f64_array(is, f.D.data(), static_cast<std::size_t>(r));
  } else {
    f.V.resize(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(r));
    get_f64_array(is, f.V.data(), static_cast<std::size_t>(M * r));
  }
  if (!is) throw invalid_input("load_factorization: truncated file " + path);
  return f;
}

}  // namespace hdf
