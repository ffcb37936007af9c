#include "hdf/baselines.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

#include "hdf/rng.hpp"
#include "hdf/threading.hpp"

namespace hdf {

Matrix synthetic_normal_points(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw invalid_input("synthetic_normal_points: need n, d >= 1");
  Rng rng(seed);
  Matrix X(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) X(i, j) = rng.normal();
  double mx = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) mx = std::max(mx, X.row(i).norm());
  if (mx > 0) X /= mx;
  return X;
}

Matrix dense_kernel_matrix(const IsotropicKernel& kernel, const Matrix& X, const Matrix& Y,
                           int threads) {
  const Matrix& Yr = Y.rows() ? Y : X;
  const Eigen::Index N = X.rows(), M = Yr.rows();
  if (X.cols() != Yr.cols()) throw invalid_input("dense_kernel_matrix: dimension mismatch");
  if (static_cast<std::size_t>(N) * static_cast<std::size_t>(M) > std::size_t{40000000})
    throw invalid_input("dense_kernel_matrix: N*M exceeds the desk-scale cap 4e7");
  Matrix K(N, M);
  parallel_for(static_cast<std::size_t>(N), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i)
      for (Eigen::Index j = 0; j < M; ++j)
        K(static_cast<Eigen::Index>(i), j) =
            kernel((X.row(static_cast<Eigen::Index>(i)) - Yr.row(j)).norm());
  });
  return K;
}

namespace {
Matrix cross_columns(const IsotropicKernel& kernel, const Matrix& X,
                     const std::vector<std::size_t>& idx) {
  Matrix C(X.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j)
    for (Eigen::Index i = 0; i < X.rows(); ++i)
      C(i, static_cast<Eigen::Index>(j)) =
          kernel((X.row(i) - X.row(static_cast<Eigen::Index>(idx[j]))).norm());
  return C;
}

Matrix core_matrix(const IsotropicKernel& kernel, const Matrix& X,
                   const std::vector<std::size_t>& idx) {
  const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
  Matrix W(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b)
      W(a, b) = kernel((X.row(static_cast<Eigen::Index>(idx[a])) -
                        X.row(static_cast<Eigen::Index>(idx[b])))
                           .norm());
  return W;
}

std::vector<std::size_t> draw_indices(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 1 || m > n) throw invalid_input("nystrom: rank must satisfy 1 <= m <= N");
  Rng rng(seed);
  return rng.sample_without_replacement(n, m);
}
}  // namespace

NystromFactorization::NystromFactorization(const IsotropicKernel& kernel, const Matrix& X,
                                           std::size_t m, std::uint64_t seed)
    : indices_(draw_indices(static_cast<std::size_t>(X.rows()), m, seed)),
      C_(cross_columns(kernel, X, indices_)),
      core_(core_matrix(kernel, X, indices_), -1.0) {}

Vector NystromFactorization::apply(const Vector& w) const {
  if (w.size() != C_.rows()) throw invalid_input("nystrom apply: length mismatch");
  return C_ * core_.solve(Vector(C_.transpose() * w));
}

Matrix NystromFactorization::reconstruct() const {
  const std::size_t nm = static_cast<std::size_t>(C_.rows()) * static_cast<std::size_t>(C_.rows());
  if (nm > std::size_t{40000000})
    throw invalid_input("nystrom reconstruct: exceeds the desk-scale cap");
  return C_ * core_.solve(Matrix(C_.transpose()));
}

Vector singular_values(const Matrix& K) {
  const bool square = K.rows() == K.cols();
  if (square) {
    const double scale = K.cwiseAbs().maxCoeff();
    const double asym = (K - K.transpose()).cwiseAbs().maxCoeff();
    if (scale == 0) return Vector::Zero(K.rows());
    if (asym <= 1e-12 * scale) {
      EigSymResult es = eig_sym(Matrix(0.5 * (K + K.transpose())));
      return es.values.cwiseAbs();  // already |.|-descending
    }
  }
  Eigen::BDCSVD<Matrix> svd(K);
  return svd.singularValues();
}

double svd_optimal_error(const Matrix& K, std::size_t r) {
  Vector sv = singular_values(K);
  const double total = sv.squaredNorm();
  if (total == 0) return 0.0;
  double tail = 0.0;
  for (Eigen::Index i = static_cast<Eigen::Index>(r); i < sv.size(); ++i) tail += sv[i] * sv[i];
  return std::sqrt(tail / total);
}

}  // namespace hdf
