#include "hdf/krr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hdf/baselines.hpp"
#include "hdf/rng.hpp"
#include "hdf/threading.hpp"

namespace hdf {

namespace {
double sq_dist(const Matrix& X, Eigen::Index i, const Matrix& C, Eigen::Index c) {
  return (X.row(i) - C.row(c)).squaredNorm();
}
}  // namespace

ClusterModel kmeans(const Matrix& X, int k, std::uint64_t seed, int max_iters) {
  const Eigen::Index N = X.rows();
  if (k < 1 || k > N) throw invalid_input("kmeans: need 1 <= k <= N");
  Rng rng(seed);
  ClusterModel m;
  m.n_clusters = k;
  m.centroids.resize(k, X.cols());

  // k-means++ seeding
  std::vector<double> d2(static_cast<std::size_t>(N), std::numeric_limits<double>::infinity());
  Eigen::Index first = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(N)));
  m.centroids.row(0) = X.row(first);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < N; ++i) {
      d2[i] = std::min(d2[i], sq_dist(X, i, m.centroids, c - 1));
      total += d2[i];
    }
    Eigen::Index pick = 0;
    if (total > 0) {
      double target = rng.uniform() * total, acc = 0.0;
      for (Eigen::Index i = 0; i < N; ++i) {
        acc += d2[i];
        if (acc >= target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(N)));
    }
    m.centroids.row(c) = X.row(pick);
  }

  m.assignments.assign(static_cast<std::size_t>(N), 0);
  std::vector<int> counts(k, 0);
  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < N; ++i) {
      int best = 0;
      double bd = sq_dist(X, i, m.centroids, 0);
      for (int c = 1; c < k; ++c) {
        double dd = sq_dist(X, i, m.centroids, c);
        if (dd < bd) {
          bd = dd;
          best = c;
        }
      }
      if (m.assignments[static_cast<std::size_t>(i)] != best) {
        m.assignments[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;
    // recompute centroids
    m.centroids.setZero();
    std::fill(counts.begin(), counts.end(), 0);
    for (Eigen::Index i = 0; i < N; ++i) {
      m.centroids.row(m.assignments[static_cast<std::size_t>(i)]) += X.row(i);
      ++counts[m.assignments[static_cast<std::size_t>(i)]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        m.centroids.row(c) /= counts[c];
      } else {
        // reseed from the point farthest from its own centroid
        double worst = -1.0;
        Eigen::Index pick = 0;
        for (Eigen::Index i = 0; i < N; ++i) {
          double dd = sq_dist(X, i, m.centroids, m.assignments[static_cast<std::size_t>(i)]);
          if (dd > worst) {
            worst = dd;
            pick = i;
          }
        }
        m.centroids.row(c) = X.row(pick);
      }
    }
  }

  m.members.assign(k, {});
  for (Eigen::Index i = 0; i < N; ++i)
    m.members[m.assignments[static_cast<std::size_t>(i)]].push_back(static_cast<int>(i));
  return m;
}

namespace {

Matrix gather_rows(const Matrix& X, const std::vector<int>& idx) {
  Matrix B(static_cast<Eigen::Index>(idx.size()), X.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) B.row(static_cast<Eigen::Index>(i)) = X.row(idx[i]);
  return B;
}

// One diagonal block: either a dense matrix or a low-rank factorization.
struct Block {
  bool dense = true;
  Matrix B;
  LowRankFactorization lr;
  std::size_t rank = 0;
  double rel_error = 0.0;

  Vector apply(const Vector& w) const { return dense ? Vector(B * w) : matvec(lr, w); }
};

}  // namespace

KrrModel fit(const IsotropicKernel& kernel, const Matrix& X, const Vector& y,
             const KrrOptions& opts) {
  const Eigen::Index N = X.rows();
  if (y.size() != N) throw invalid_input("krr fit: labels length mismatch");
  if (!(opts.lambda > 0)) throw invalid_input("krr fit: lambda must be positive");

  KrrModel model;
  model.lambda = opts.lambda;
  model.clusters = kmeans(X, std::min<int>(opts.clusters, static_cast<int>(N)), opts.seed);
  const int nc = model.clusters.n_clusters;

  std::vector<Block> blocks(nc);
  std::vector<Matrix> exact(nc);          // exact kernel blocks (preconditioner + errors)
  std::vector<std::unique_ptr<CholeskyFactor>> precond(nc);

  for (int c = 0; c < nc; ++c) {
    const auto& idx = model.clusters.members[c];
    Matrix Xc = gather_rows(X, idx);
    exact[c] = dense_kernel_matrix(kernel, Xc, Matrix(), opts.threads);
    Block& blk = blocks[c];
    const Eigen::Index bs = Xc.rows();
    if (opts.method == KrrMethod::dense || bs < opts.dense_block_floor) {
      blk.dense = true;
      blk.B = exact[c];
      blk.rank = static_cast<std::size_t>(bs);
      blk.rel_error = 0.0;
    } else if (opts.method == KrrMethod::hdf) {
      FactorOptions fo;
      fo.threads = opts.threads;
      blk.lr = factor_sym(kernel, opts.eps, Xc, fo);
      if (blk.lr.rank == 0) {
        // fully truncated block: keep it dense rather than zero
        blk.dense = true;
        blk.B = exact[c];
        blk.rank = static_cast<std::size_t>(bs);
        blk.rel_error = 0.0;
      } else {
        blk.dense = false;
        blk.rank = blk.lr.rank;
        Matrix R = exact[c] - Matrix(blk.lr.U * blk.lr.D.asDiagonal() * blk.lr.U.transpose());
        blk.rel_error = exact[c].norm() > 0 ? R.norm() / exact[c].norm() : 0.0;
      }
    } else {
      std::size_t want = bs > 0 ? static_cast<std::size_t>(bs) : 1;
      if (!opts.nystrom_ranks.empty()) {
        if (opts.nystrom_ranks.size() != 1 &&
            opts.nystrom_ranks.size() != static_cast<std::size_t>(nc))
          throw invalid_input("krr fit: nystrom_ranks must have 1 or n_clusters entries");
        want = opts.nystrom_ranks.size() == 1 ? opts.nystrom_ranks[0]
                                              : opts.nystrom_ranks[static_cast<std::size_t>(c)];
      }
      want = std::min<std::size_t>(std::max<std::size_t>(want, 1), static_cast<std::size_t>(bs));
      NystromFactorization nf(kernel, Xc, want, opts.seed + 7919 * (c + 1));
      blk.dense = true;  // store reconstructed block densely (desk scale blocks)
      blk.B = nf.reconstruct();
      blk.rank = want;
      blk.rel_error = exact[c].norm() > 0 ? (exact[c] - blk.B).norm() / exact[c].norm() : 0.0;
    }
    model.block_ranks.push_back(blk.rank);
    model.block_rel_errors.push_back(blk.rel_error);
    // preconditioner: inverse of the exact block (optionally with lambda)
    Matrix P = exact[c];
    if (opts.precond_lambda) P.diagonal().array() += opts.lambda;
    precond[c] = std::make_unique<CholeskyFactor>(P, -1.0);
  }

  LinearOperator op;
  op.dim = N;
  op.apply = [&](const Vector& w, Vector& out) {
    out = opts.lambda * w;
    for (int c = 0; c < nc; ++c) {
      const auto& idx = model.clusters.members[c];
      Vector wc(static_cast<Eigen::Index>(idx.size()));
      for (std::size_t i = 0; i < idx.size(); ++i) wc[static_cast<Eigen::Index>(i)] = w[idx[i]];
      Vector bc = blocks[c].apply(wc);
      for (std::size_t i = 0; i < idx.size(); ++i) out[idx[i]] += bc[static_cast<Eigen::Index>(i)];
    }
  };
  LinearOperator pre;
  pre.dim = N;
  pre.apply = [&](const Vector& rv, Vector& out) {
    out.resize(N);
    for (int c = 0; c < nc; ++c) {
      const auto& idx = model.clusters.members[c];
      Vector rc(static_cast<Eigen::Index>(idx.size()));
      for (std::size_t i = 0; i < idx.size(); ++i) rc[static_cast<Eigen::Index>(i)] = rv[idx[i]];
      Vector zc = precond[c]->solve(rc);
      for (std::size_t i = 0; i < idx.size(); ++i) out[idx[i]] = zc[static_cast<Eigen::Index>(i)];
    }
  };

  CgResult cg = cg_solve(op, y, pre, opts.cg_tol, opts.cg_max_iters);
  model.weights = cg.x;
  model.converged = cg.converged;
  model.cg_iters = cg.iters;
  return model;
}

Vector predict(const KrrModel& model, const IsotropicKernel& kernel, const Matrix& X_train,
               const Matrix& X_test, int threads) {
  if (X_train.rows() != model.weights.size())
    throw invalid_input("krr predict: training set / weights mismatch");
  if (X_train.cols() != X_test.cols()) throw invalid_input("krr predict: dimension mismatch");
  if (!model.weights.allFinite()) throw invalid_input("krr predict: non-finite weights");
  Vector out(X_test.rows());
  parallel_for(static_cast<std::size_t>(X_test.rows()), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      double acc = 0.0;
      for (Eigen::Index j = 0; j < X_train.rows(); ++j)
        acc += kernel((X_test.row(static_cast<Eigen::Index>(i)) - X_train.row(j)).norm()) *
               model.weights[j];
      out[static_cast<Eigen::Index>(i)] = acc;
    }
  });
  return out;
}

double mse(const Vector& predictions, const Vector& truth) {
  if (predictions.size() == 0) throw invalid_input("mse: empty input");
  if (predictions.size() != truth.size()) throw invalid_input("mse: length mismatch");
  return (predictions - truth).squaredNorm() / static_cast<double>(predictions.size());
}

}  // namespace hdf
