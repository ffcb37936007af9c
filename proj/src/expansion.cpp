#include "hdf/expansion.hpp"

#include <cmath>
#include <string>

namespace hdf {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
    if (c > static_cast<unsigned __int128>(UINT64_MAX))
      throw invalid_input("binomial: value overflows 64 bits");
  }
  return static_cast<std::uint64_t>(c);
}

double multinomial(int j_half, int k1, int k2, int k3) {
  if (j_half < 0 || k1 < 0 || k2 < 0 || k3 < 0)
    throw invalid_input("multinomial: negative argument");
  if (k1 + k2 + k3 != j_half)
    throw invalid_input("multinomial: parts do not sum to the total");
  if (j_half <= 30)  // exact: max value 3^30 < 2^53
    return static_cast<double>(binomial(j_half, k1) * binomial(j_half - k1, k2));
  return std::exp(std::lgamma(j_half + 1.0) - std::lgamma(k1 + 1.0) - std::lgamma(k2 + 1.0) -
                  std::lgamma(k3 + 1.0));
}

double gegenbauer_connection(double alpha, int k, int i) {
  if (!(alpha > 0)) throw unsupported_dimension("gegenbauer_connection: alpha must be positive");
  if (k < 0 || i < 0 || k > i || (i - k) % 2 != 0) return 0.0;
  // i! (alpha+k) / (2^i ((i-k)/2)! (alpha)_{(i+k)/2+1})
  const int n = (i + k) / 2 + 1;
  const double lg = std::lgamma(i + 1.0) + std::log(alpha + k) - i * std::log(2.0) -
                    std::lgamma((i - k) / 2 + 1.0) -
                    (std::lgamma(alpha + n) - std::lgamma(alpha));
  return std::exp(lg);
}

double CoefficientTensor::value(int k, int m, int n) const {
  if (k < 0 || k > p / 2) return 0.0;
  if (m < k || m > p - k || (m - k) % 2 != 0) return 0.0;
  if (n < k || n > p - m || (n - k) % 2 != 0) return 0.0;
  return values_[k][(m - k) / 2][(n - k) / 2];
}

std::size_t CoefficientTensor::stored_nonzeros() const {
  std::size_t c = 0;
  for (const auto& byk : values_)
    for (const auto& byl : byk)
      for (double v : byl)
        if (v != 0.0) ++c;
  return c;
}

CoefficientTensor build_tensor(const ChebyshevExpansion& cheb, const ChebCoeffTable& table,
                               int d) {
  if (cheb.p != table.p) throw invalid_input("build_tensor: expansion/table degree mismatch");
  if (d < 3) throw unsupported_dimension("build_tensor: dimension must be >= 3");
  const int p = cheb.p;
  const double alpha = d / 2.0 - 1.0;

  // B_q = sum_{i>=q} t_{i,q} a_i; the i-sum in T' does not depend on k3.
  std::vector<double> B(p + 1, 0.0);
  for (int q = 0; q <= p; ++q) {
    double s = 0.0;
    for (int i = q; i <= p; ++i)
      if ((i - q) % 2 == 0) s += table(i, q) * cheb.coeffs[i];
    B[q] = s;
  }

  CoefficientTensor T;
  T.p = p;
  T.d = d;
  T.alpha = alpha;
  T.values_.resize(p / 2 + 1);

  // lgamma(x+1) for integer x, precomputed
  std::vector<double> lgf(p + 2);
  for (int i = 0; i <= p + 1; ++i) lgf[i] = std::lgamma(i + 1.0);
  const double lgalpha = std::lgamma(alpha);

  for (int k = 0; k <= p / 2; ++k) {
    auto& byk = T.values_[k];
    byk.resize(T.cols(k));
    const double ksign = (k % 2) ? -1.0 : 1.0;  // every k3 term shares the parity of k
    for (int l = 0; l < T.cols(k); ++l) {
      const int m = k + 2 * l;
      auto& row = byk[l];
      row.assign((p - k - m) / 2 + 1, 0.0);
      for (int ni = 0; ni < static_cast<int>(row.size()); ++ni) {
        const int n = k + 2 * ni;
        const int q = n + m;
        if (B[q] == 0.0) continue;  // the i-sum vanished; so does the entry
        const int hi = std::min(std::min(p / 2, m), n);
        // log-magnitude sum with max shift; all terms carry the same sign
        double mmax = -INFINITY;
        std::vector<double> logs;
        logs.reserve((hi - k) / 2 + 1);
        for (int k3 = k; k3 <= hi; k3 += 2) {
          // A_{k3,k} in logs (positive for alpha > 0)
          const int nr = (k3 + k) / 2 + 1;
          const double logA = lgf[k3] + std::log(alpha + k) - k3 * std::log(2.0) -
                              lgf[(k3 - k) / 2] - (std::lgamma(alpha + nr) - lgalpha);
          const double logmult =
              lgf[q / 2] - lgf[(n - k3) / 2] - lgf[(m - k3) / 2] - lgf[k3];
          const double lt = logA + k3 * std::log(2.0) + logmult;
          logs.push_back(lt);
          mmax = std::max(mmax, lt);
        }
        double s = 0.0;
        for (double lt : logs) s += std::exp(lt - mmax);
        row[ni] = ksign * s * std::exp(mmax) * B[q];
      }
    }
  }
  return T;
}

}  // namespace hdf
