#include "hdf/radial.hpp"

#include <cmath>
#include <string>

namespace hdf {

namespace {
Matrix power_columns(const Vector& norms, int k, int L) {
  // column l holds norms^(k+2l); 0^0 == 1
  Matrix Y(norms.size(), L);
  for (Eigen::Index i = 0; i < norms.size(); ++i) {
    const double r = norms[i];
    double v = 1.0;
    for (int e = 0; e < k; ++e) v *= r;
    const double r2 = r * r;
    for (int l = 0; l < L; ++l) {
      Y(i, l) = v;
      v *= r2;
    }
  }
  return Y;
}
}  // namespace

std::pair<Matrix, Matrix> build_radial_matrices(const CoefficientTensor& tensor, int k,
                                                const Vector& normsX, const Vector& normsY) {
  if (k < 0 || k > tensor.orders())
    throw invalid_input("build_radial_matrices: order out of range");
  const int L = tensor.cols(k);
  Matrix X(normsX.size(), L);
  for (int l = 0; l < L; ++l) {
    const auto& coef = tensor.radial_coeffs(k, l);
    for (Eigen::Index i = 0; i < normsX.size(); ++i) {
      const double r = normsX[i];
      const double r2 = r * r;
      double acc = 0.0;
      for (std::size_t j = coef.size(); j-- > 0;) acc = acc * r2 + coef[j];
      double rk = 1.0;
      for (int e = 0; e < k; ++e) rk *= r;
      X(i, l) = acc * rk;
    }
  }
  return {std::move(X), power_columns(normsY, k, L)};
}

Matrix radial_mixing_matrix(const CoefficientTensor& tensor, int k) {
  const int L = tensor.cols(k);
  Matrix S(L, L);
  for (int l = 0; l < L; ++l)
    for (int l2 = 0; l2 < L; ++l2) S(l, l2) = tensor.value(k, k + 2 * l, k + 2 * l2);
  return S;
}

RadialFactors compress_radial(const Matrix& Xk, const Matrix& Yk, double tau) {
  if (Xk.cols() != Yk.cols()) throw invalid_input("compress_radial: column mismatch");
  if (tau < 0) throw invalid_input("compress_radial: negative tau");
  RadialFactors out;
  QrResult qx, qy;
  try {
    qx = qr_tall(Xk);
    qy = qr_tall(Yk);
  } catch (const invalid_input& e) {
    throw numeric_failure("compress_radial: QR failed: " + std::string(e.what()));
  }
  SvdResult svd = svd_small(qx.R * qy.R.transpose());
  int s = 0;
  while (s < svd.sigma.size() && svd.sigma[s] > tau && svd.sigma[s] > 0.0) ++s;
  out.s_k = s;
  out.sigma_kept = svd.sigma.head(s);
  if (s > 0) {
    const Vector root = svd.sigma.head(s).cwiseSqrt();
    out.Xbar = qx.Q * (svd.U.leftCols(s) * root.asDiagonal());
    out.Ybar = qy.Q * (svd.V.leftCols(s) * root.asDiagonal());
  } else {
    out.Xbar.resize(Xk.rows(), 0);
    out.Ybar.resize(Yk.rows(), 0);
  }
  return out;
}

RadialFactors compress_radial_sym(const Matrix& Yk, const Matrix& mixing, double tau) {
  if (mixing.rows() != mixing.cols() || mixing.rows() != Yk.cols())
    throw invalid_input("compress_radial_sym: mixing shape mismatch");
  if (tau < 0) throw invalid_input("compress_radial_sym: negative tau");
  const double scale = mixing.cwiseAbs().maxCoeff();
  if (scale > 0 && (mixing - mixing.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw numeric_failure("compress_radial_sym: mixing matrix asymmetric beyond tolerance");
  RadialFactors out;
  out.sym = true;
  QrResult qy = qr_tall(Yk);
  Matrix mid = qy.R * mixing * qy.R.transpose();
  mid = (0.5 * (mid + mid.transpose())).eval();
  EigSymResult es = eig_sym(mid);  // sorted by |lambda| descending
  int s = 0;
  while (s < es.values.size() && std::abs(es.values[s]) > tau) ++s;
  out.s_k = s;
  out.eigvals = es.values.head(s);
  out.sigma_kept = es.values.head(s).cwiseAbs();
  if (s > 0)
    out.Xbar = qy.Q * es.vectors.leftCols(s);
  else
    out.Xbar.resize(Yk.rows(), 0);
  return out;
}

}  // namespace hdf
