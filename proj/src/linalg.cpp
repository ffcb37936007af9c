#include "hdf/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace hdf {

namespace {
void require_finite(const Matrix& A, const char* who) {
  if (!A.allFinite()) throw invalid_input(std::string(who) + ": non-finite input entry");
}
}  // namespace

QrResult qr_tall(const Matrix& A) {
  if (A.rows() < 1 || A.cols() < 1) throw invalid_input("qr_tall: empty matrix");
  require_finite(A, "qr_tall");
  const Eigen::Index q = std::min(A.rows(), A.cols());
  Eigen::HouseholderQR<Matrix> qr(A);
  QrResult out;
  out.Q = qr.householderQ() * Matrix::Identity(A.rows(), q);
  out.R = qr.matrixQR().topRows(q).triangularView<Eigen::Upper>();
  return out;
}

SvdResult svd_small(const Matrix& A) {
  require_finite(A, "svd_small");
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw numeric_failure("svd_small: Jacobi SVD did not converge");
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

EigSymResult eig_sym(const Matrix& A) {
  require_finite(A, "eig_sym");
  if (A.rows() != A.cols()) throw invalid_input("eig_sym: matrix not square");
  const double scale = A.cwiseAbs().maxCoeff();
  const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
  if (scale > 0 && asym > 1e-10 * scale)
    throw invalid_input("eig_sym: input asymmetric beyond 1e-10 relative");
  Eigen::SelfAdjointEigenSolver<Matrix> es(A);
  if (es.info() != Eigen::Success) throw numeric_failure("eig_sym: eigensolver did not converge");
  const Eigen::Index n = A.rows();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  const Vector& ev = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(ev[a]) > std::abs(ev[b]);
  });
  EigSymResult out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values[i] = ev[order[i]];
    out.vectors.col(i) = es.eigenvectors().col(order[i]);
  }
  return out;
}

namespace {
// Returns the pivot index that went nonpositive, or -1 on success.
Eigen::Index cholesky_in_place(Matrix& L) {
  const Eigen::Index n = L.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = L(j, j) - L.row(j).head(j).squaredNorm();
    if (!(d > 0.0) || !std::isfinite(d)) return j;
    d = std::sqrt(d);
    L(j, j) = d;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = L(i, j) - L.row(i).head(j).dot(L.row(j).head(j));
      L(i, j) = s / d;
    }
  }
  L.triangularView<Eigen::StrictlyUpper>().setZero();
  return -1;
}
}  // namespace

CholeskyFactor::CholeskyFactor(const Matrix& A, double jitter) {
  if (A.rows() != A.cols()) throw invalid_input("solve_spd: matrix not square");
  require_finite(A, "solve_spd");
  const Eigen::Index n = A.rows();
  const double base = 1e-12 * A.trace() / static_cast<double>(n);
  double j = jitter < 0 ? base : jitter;
  Eigen::Index bad_pivot = -1;
  for (int attempt = 0; attempt <= 8; ++attempt) {
    L_ = A;
    if (j > 0) L_.diagonal().array() += j;
    bad_pivot = cholesky_in_place(L_);
    if (bad_pivot < 0) {
      jitter_ = j;
      return;
    }
    j = std::max(2.0 * j, j == 0.0 ? std::max(base, 1e-300) : 2.0 * j);
  }
  throw numeric_failure("solve_spd: Cholesky failed after jitter escalation, pivot " +
                        std::to_string(bad_pivot) + " nonpositive");
}

Vector CholeskyFactor::solve(const Vector& b) const {
  Vector y = L_.triangularView<Eigen::Lower>().solve(b);
  return L_.transpose().triangularView<Eigen::Upper>().solve(y);
}

Matrix CholeskyFactor::solve(const Matrix& B) const {
  Matrix y = L_.triangularView<Eigen::Lower>().solve(B);
  return L_.transpose().triangularView<Eigen::Upper>().solve(y);
}

Vector solve_spd(const Matrix& A, const Vector& b, double jitter) {
  if (A.rows() != b.size()) throw invalid_input("solve_spd: dimension mismatch");
  CholeskyFactor f(A, jitter);
  return f.solve(b);
}

CgResult cg_solve(const LinearOperator& op, const Vector& b,
                  const LinearOperator& precond, double tol, int max_iters) {
  if (b.size() != op.dim) throw invalid_input("cg_solve: rhs length mismatch");
  const bool use_precond = static_cast<bool>(precond.apply);
  const double bnorm = b.norm();
  CgResult res;
  res.x = Vector::Zero(op.dim);
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }

  Vector r = b;
  Vector z(op.dim);
  if (use_precond)
    precond.apply(r, z);
  else
    z = r;
  Vector p = z;
  double rz = r.dot(z);
  res.precond_residuals.push_back(std::sqrt(std::max(0.0, rz)));
  Vector Ap(op.dim), true_r(op.dim);

  for (int it = 1; it <= max_iters; ++it) {
    op.apply(p, Ap);
    const double pAp = p.dot(Ap);
    if (!std::isfinite(pAp) || !std::isfinite(rz))
      throw numeric_failure("cg_solve: non-finite value encountered");
    if (pAp <= 0.0) break;  // operator not SPD along p; return best iterate
    const double alpha = rz / pAp;
    res.x += alpha * p;
    r -= alpha * Ap;
    if (use_precond)
      precond.apply(r, z);
    else
      z = r;
    const double rz_next = r.dot(z);
    if (!std::isfinite(rz_next)) throw numeric_failure("cg_solve: non-finite value encountered");
    res.iters = it;
    res.precond_residuals.push_back(std::sqrt(std::max(0.0, rz_next)));
    if (r.norm() <= tol * bnorm) {
      op.apply(res.x, true_r);
      true_r = b - true_r;
      if (true_r.norm() <= tol * bnorm) {
        res.converged = true;
        return res;
      }
      r = true_r;  // drift correction; continue iterating
      if (use_precond)
        precond.apply(r, z);
      else
        z = r;
      rz = r.dot(z);
      p = z;
      continue;
    }
    const double beta = rz_next / rz;
    rz = rz_next;
    p = z + beta * p;
  }
  return res;  // converged == false, best iterate in res.x
}

}  // namespace hdf
