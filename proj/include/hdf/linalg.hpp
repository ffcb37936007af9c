#pragma once

#include <Eigen/Dense>
#include <functional>

#include "hdf/errors.hpp"

namespace hdf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
// Row-major storage for the factor matrices filled point-by-point.
using MatrixRM = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Abstract SPD operator for the CG driver: y = A x.
struct LinearOperator {
  Eigen::Index dim = 0;
  std::function<void(const Vector&, Vector&)> apply;
};

struct QrResult {
  Matrix Q;  // N x q, orthonormal columns, q = min(N, m)
  Matrix R;  // q x m, upper triangular (trapezoidal when N < m)
};

// Householder QR. Contract targets N >= m >= 1; wider inputs are accepted and
// produce the trapezoidal economy form.
QrResult qr_tall(const Matrix& A);

struct SvdResult {
  Matrix U;
  Vector sigma;  // nonincreasing, nonnegative
  Matrix V;
};

// One-sided Jacobi SVD for the small (p/2-scale) matrices.
SvdResult svd_small(const Matrix& A);

struct EigSymResult {
  Vector values;  // sorted by decreasing |value|
  Matrix vectors; // orthonormal columns, matching order
};

// Symmetric eigendecomposition; input must satisfy
// ||A - A^T||_inf <= 1e-10 ||A||_inf.
EigSymResult eig_sym(const Matrix& A);

// Cholesky factorization of A + jitter*I with failure escalation.
// Factor once, solve many (used by the KRR block preconditioner and Nystrom).
class CholeskyFactor {
public:
  // jitter < 0 selects the default policy 1e-12 * trace/n. On failure the
  // jitter is doubled up to 8 times (from the default floor) before a
  // numeric_failure naming the offending pivot is thrown.
  CholeskyFactor(const Matrix& A, double jitter);

  Vector solve(const Vector& b) const;
  Matrix solve(const Matrix& B) const;
  double jitter_used() const { return jitter_; }

private:
  Matrix L_;
  double jitter_ = 0.0;
};

// One-shot SPD solve of (A + jitter*I) x = b.
Vector solve_spd(const Matrix& A, const Vector& b, double jitter = 0.0);

struct CgResult {
  Vector x;
  int iters = 0;
  bool converged = false;
  std::vector<double> precond_residuals;  // sqrt(r^T M^-1 r) per iteration
};

// Preconditioned conjugate gradients for SPD operators. precond.apply empty
// means identity. Converged when ||op(x) - b|| <= tol * ||b|| (verified on
// the true residual).
CgResult cg_solve(const LinearOperator& op, const Vector& b,
                  const LinearOperator& precond, double tol, int max_iters = 1024);

}  // namespace hdf
