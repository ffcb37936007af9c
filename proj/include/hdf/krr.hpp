#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "hdf/factorization.hpp"

namespace hdf {

struct ClusterModel {
  int n_clusters = 0;
  std::vector<int> assignments;            // point -> cluster
  Matrix centroids;                        // k x d
  std::vector<std::vector<int>> members;   // per-cluster point indices (ascending)
};

// Lloyd iterations from seeded k-means++ starts; empty clusters are reseeded
// from the point farthest from its centroid.
ClusterModel kmeans(const Matrix& X, int k, std::uint64_t seed, int max_iters = 100);

enum class KrrMethod { hdf, nystrom, dense };

struct KrrOptions {
  KrrMethod method = KrrMethod::hdf;
  double lambda = 1.0;
  double eps = 1e-3;                        // block factorization tolerance (hdf)
  int clusters = 30;
  std::vector<std::size_t> nystrom_ranks;   // per-block ranks; single value broadcasts
  bool precond_lambda = true;               // include lambda*I in the preconditioner blocks
  double cg_tol = 1e-8;
  int cg_max_iters = 1024;
  std::uint64_t seed = 0;
  int threads = 1;
  int dense_block_floor = 32;               // blocks below this size stay dense
};

struct KrrModel {
  Vector weights;
  double lambda = 0.0;
  bool converged = false;
  int cg_iters = 0;
  ClusterModel clusters;
  std::vector<std::size_t> block_ranks;     // rank used per block (dense -> block size)
  std::vector<double> block_rel_errors;     // Frobenius error of each block approximation
};

// Block-diagonal KRR training: (lambda I + blockdiag(B~_i)) w = y by CG with
// exact-block preconditioner.
KrrModel fit(const IsotropicKernel& kernel, const Matrix& X, const Vector& y,
             const KrrOptions& opts);

// Dense cross-kernel prediction K(X_test, X_train) w, streamed in row blocks.
Vector predict(const KrrModel& model, const IsotropicKernel& kernel, const Matrix& X_train,
               const Matrix& X_test, int threads = 1);

double mse(const Vector& predictions, const Vector& truth);

}  // namespace hdf
