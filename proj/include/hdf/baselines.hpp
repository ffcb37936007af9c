#pragma once

#include <cstdint>
#include <vector>

#include "hdf/kernels.hpp"

namespace hdf {

// Standard-normal points rescaled so the largest row norm is exactly 1.
// Deterministic given the seed; shared by the benchmarks and the CLI.
Matrix synthetic_normal_points(Eigen::Index n, Eigen::Index d, std::uint64_t seed);

// Exact dense kernel matrix; refuses above the desk-scale cap N*M <= 4e7.
Matrix dense_kernel_matrix(const IsotropicKernel& kernel, const Matrix& X, const Matrix& Y,
                           int threads = 1);

// Uniform-sampling Nystrom approximation K ~= C W^-1 C^T with jittered core.
class NystromFactorization {
public:
  NystromFactorization(const IsotropicKernel& kernel, const Matrix& X, std::size_t m,
                       std::uint64_t seed);

  const std::vector<std::size_t>& indices() const { return indices_; }
  std::size_t rank() const { return indices_.size(); }

  Vector apply(const Vector& w) const;      // C (W^-1 (C^T w))
  Matrix reconstruct() const;               // desk-scale dense C W^-1 C^T
  double core_jitter() const { return core_.jitter_used(); }

private:
  std::vector<std::size_t> indices_;
  Matrix C_;
  CholeskyFactor core_;
};

inline NystromFactorization nystrom(const IsotropicKernel& kernel, const Matrix& X, std::size_t m,
                                    std::uint64_t seed) {
  return NystromFactorization(kernel, X, m, seed);
}

// Optimal rank-r relative Frobenius error sqrt(sum_{i>r} s_i^2)/||K||_F.
double svd_optimal_error(const Matrix& K, std::size_t r);

// All singular values of K, descending (symmetric inputs use the
// eigendecomposition route).
Vector singular_values(const Matrix& K);

}  // namespace hdf
