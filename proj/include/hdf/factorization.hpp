#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hdf/harmonics.hpp"
#include "hdf/kernels.hpp"
#include "hdf/radial.hpp"

namespace hdf {

enum class TauMode { practical, strict };

struct FactorOptions {
  TauMode mode = TauMode::practical;
  double cheb_split = 0.5;     // fraction of eps allotted to the Chebyshev tail
  int threads = 1;
  std::uint64_t max_rank = 0;            // 0 = unlimited; resource guard, throws numeric_failure
  std::optional<double> tau_override;    // replaces the derived tau when set
  bool relative_tau = false;             // compare tau against sigma_i / sigma_1 per order
};

// Error accounting of one factorization: eps = eps_cheb + sqrt(N) C tau.
struct ErrorBudget {
  double eps_total = 0.0;
  double eps_cheb = 0.0;       // realized coefficient tail
  double tau = 0.0;
  double bound_constant = 0.0; // C_{p/2} = sum_k binom(k+d-3,k)/Z_k
};

struct LowRankFactorization {
  MatrixRM U;  // N x r
  MatrixRM V;  // M x r; empty when symmetric
  Vector D;    // r signed weights (symmetric variant only)
  bool sym = false;

  std::uint64_t rank = 0;
  int p = 0;
  int d = 0;
  std::vector<int> s_k;  // per-order retained ranks, k = 0..p/2

  ErrorBudget budget;

  // scaling metadata (original coordinates -> expansion domain)
  Vector center;
  double scale = 1.0;
  std::string kernel_name;
  double kernel_sigma = 0.0;

  Eigen::Index rows() const { return U.rows(); }
  Eigen::Index cols_in() const { return sym ? U.rows() : V.rows(); }
};

// tau for a target eps: practical ignores the union bound, strict divides it
// out so the a-priori bound lands at eps.
double choose_tau(double eps, TauMode mode, Eigen::Index N, double bound_constant);

// Harmonic Decomposition Factorization, K ~= U V^T.
LowRankFactorization factor(const IsotropicKernel& kernel, double eps, const Matrix& X,
                            const Matrix& Y, const FactorOptions& opts = {});

// Symmetric variant, K ~= U D U^T with signed D (halved memory).
LowRankFactorization factor_sym(const IsotropicKernel& kernel, double eps, const Matrix& X,
                                const FactorOptions& opts = {});

// U (V^T w) or U (D (U^T w)); never forms K.
Vector matvec(const LowRankFactorization& f, const Vector& w);

// sqrt(N) C_{p/2} tau + eps_c(p), the a-priori entrywise bound.
double apriori_bound(const LowRankFactorization& f);

enum class ErrorMode { exact, sampled };

// Relative Frobenius error against the dense kernel matrix, either exact
// (N*M capped at 4e7) or over seeded sampled entries.
double relative_error(const LowRankFactorization& f, const IsotropicKernel& kernel,
                      const Matrix& X, const Matrix& Y, ErrorMode mode,
                      std::size_t sample_size = 1u << 20, std::uint64_t seed = 0,
                      int threads = 1);

// Max entrywise |K - UV^T| and max |K| over all entries (dense oracle).
struct EntrywiseError {
  double max_abs_err = 0.0;
  double max_abs_k = 0.0;
};
EntrywiseError max_entrywise_error(const LowRankFactorization& f, const IsotropicKernel& kernel,
                                   const Matrix& X, const Matrix& Y, int threads = 1);

// Binary persistence: magic "HDF1", six little-endian u64 fields
// {N, M_or_0, r, p, d, flags}, then row-major f64 U, then V or D.
void save_factorization(const LowRankFactorization& f, const std::string& path);
LowRankFactorization load_factorization(const std::string& path);

}  // namespace hdf
