#include "hdf/chebyshev.hpp"

#include <cmath>
#include <string>

namespace hdf {

namespace detail {

double clenshaw(const std::vector<double>& a, double r) {
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t i = a.size(); i-- > 1;) {
    double b0 = 2.0 * r * b1 - b2 + a[i];
    b2 = b1;
    b1 = b0;
  }
  return r * b1 - b2 + (a.empty() ? 0.0 : a[0]);
}

namespace {
// DCT-II style quadrature: coefficients of the degree M-1 interpolant at the
// first-kind points cos(pi (j+1/2)/M).
std::vector<double> interpolant_coeffs(const IsotropicKernel& kernel, int M) {
  std::vector<double> vals(M), a(M, 0.0);
  for (int j = 0; j < M; ++j) {
    const double theta = M_PI * (j + 0.5) / M;
    const double v = kernel(std::abs(std::cos(theta)));
    if (!std::isfinite(v))
      throw invalid_input("cheb_transform: kernel returned non-finite value");
    vals[j] = v;
  }
  for (int i = 0; i < M; ++i) {
    double s = 0.0;
    for (int j = 0; j < M; ++j) s += vals[j] * std::cos(i * M_PI * (j + 0.5) / M);
    a[i] = 2.0 * s / M;
  }
  a[0] *= 0.5;
  return a;
}
}  // namespace

std::vector<double> reference_coeffs(const IsotropicKernel& kernel) {
  std::vector<double> a = interpolant_coeffs(kernel, 512);
  double mx = 0.0;
  for (double v : a) mx = std::max(mx, std::abs(v));
  // noise floor: the 512-term cosine sums carry ~1e-14 relative roundoff,
  // which spectral differentiation would otherwise amplify enormously
  for (std::size_t i = 0; i < a.size(); ++i)
    if (i % 2 == 1 || std::abs(a[i]) <= 1e-13 * mx) a[i] = 0.0;
  return a;
}

std::vector<double> differentiate(const std::vector<double>& a) {
  const int n = static_cast<int>(a.size()) - 1;
  if (n <= 0) return {0.0};
  // c_k = c_{k+2} + 2(k+1) a_{k+1}, then halve c_0
  std::vector<double> c(n, 0.0);
  double next = 0.0, next2 = 0.0;
  for (int k = n - 1; k >= 0; --k) {
    c[k] = next2 + 2.0 * (k + 1) * a[k + 1];
    next2 = next;
    next = c[k];
  }
  c[0] *= 0.5;
  return c;
}

}  // namespace detail

double ChebyshevExpansion::eval(double r) const { return detail::clenshaw(coeffs, r); }

ChebyshevExpansion cheb_transform(const IsotropicKernel& kernel, int p) {
  if (p < 0 || p % 2 != 0) throw invalid_input("cheb_transform: degree must be even and >= 0");
  ChebyshevExpansion out;
  out.p = p;
  out.coeffs = detail::interpolant_coeffs(kernel, p + 1);
  for (int i = 1; i <= p; i += 2) out.coeffs[i] = 0.0;  // vanish analytically
  return out;
}

DegreeChoice choose_degree(const IsotropicKernel& kernel, double eps) {
  if (!(eps > 0)) throw invalid_input("choose_degree: eps must be positive");
  const std::vector<double> a = detail::reference_coeffs(kernel);
  const int pmax = 256;
  // tails[i] = sum_{j >= i} |a_j|
  std::vector<double> tails(a.size() + 1, 0.0);
  for (std::size_t i = a.size(); i-- > 0;) tails[i] = tails[i + 1] + std::abs(a[i]);
  for (int p = 0; p <= pmax; p += 2)
    if (tails[p + 1] <= eps / 2) return {p, tails[p + 1]};
  throw tolerance_unreachable(
      "choose_degree: coefficient tail " + std::to_string(tails[pmax + 1]) +
          " at reference degree exceeds eps/2 = " + std::to_string(eps / 2),
      tails[pmax + 1]);
}

ChebCoeffTable cheb_coeff_table(int p) {
  if (p < 0) throw invalid_input("cheb_coeff_table: negative degree");
  ChebCoeffTable out;
  out.p = p;
  out.t.resize(p + 1);
  for (int i = 0; i <= p; ++i) out.t[i].assign(i + 1, 0.0);
  out.t[0][0] = 1.0;
  if (p >= 1) out.t[1][1] = 1.0;
  for (int i = 2; i <= p; ++i) {
    out.t[i][0] = -out.t[i - 2][0];
    for (int j = 1; j <= i; ++j)
      out.t[i][j] = 2.0 * out.t[i - 1][j - 1] - (j <= i - 2 ? out.t[i - 2][j] : 0.0);
  }
  return out;
}

double chebyshev_tail_bound(const IsotropicKernel& kernel, int p) {
  if (p < 0) throw invalid_input("chebyshev_tail_bound: negative degree");
  std::vector<double> series = detail::reference_coeffs(kernel);
  for (int k = 0; k <= p; ++k) series = detail::differentiate(series);
  double maxder = 0.0;
  for (int g = 0; g < 512; ++g) {
    const double r = static_cast<double>(g) / 511.0;
    maxder = std::max(maxder, std::abs(detail::clenshaw(series, r)));
  }
  if (!std::isfinite(maxder))
    throw numeric_failure("chebyshev_tail_bound: derivative estimate non-finite");
  // divide by 2^p (p+1)! in log space
  double logden = p * std::log(2.0) + std::lgamma(p + 2.0);
  return maxder == 0.0 ? 0.0 : std::exp(std::log(maxder) - logden);
}

}  // namespace hdf
