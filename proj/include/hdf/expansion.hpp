#pragma once

#include <cstdint>
#include <vector>

#include "hdf/chebyshev.hpp"

namespace hdf {

// Exact binomial coefficient in 64-bit integer arithmetic; throws on overflow.
std::uint64_t binomial(int n, int k);

// (j_half)! / (k1! k2! k3!), exact for small arguments, log-gamma above.
double multinomial(int j_half, int k1, int k2, int k3);

// Connection coefficients A_{ki} of cos^i g = sum_k A_{ki} C_k^alpha(cos g).
// Zero when k and i differ in parity. Requires alpha > 0.
double gegenbauer_connection(double alpha, int k, int i);

// Coefficient tensor of the rearranged expansion
//   sum_k C_k^alpha(cos g) sum_m ||y||^m sum_n ||x||^n  T[k,m,n]
// equal (as an identity) to the truncated Chebyshev interpolant of the
// kernel at ||x-y||. Entries vanish unless k, m, n share parity; only the
// parity-admissible entries are stored: for each order k and each
// m = k+2l <= p-k, the coefficients over n = k, k+2, ..., p-m.
class CoefficientTensor {
public:
  int p = 0;
  int d = 0;
  double alpha = 0.0;

  int orders() const { return p / 2; }           // k = 0..p/2
  int cols(int k) const { return (p - 2 * k) / 2 + 1; }  // admissible m count

  // coefficients over n for (k, m = k+2l); size (p - k - m)/2 + 1
  const std::vector<double>& radial_coeffs(int k, int l) const { return values_[k][l]; }

  // 0 for parity-violating or out-of-range (k, m, n)
  double value(int k, int m, int n) const;

  std::size_t stored_nonzeros() const;

  friend CoefficientTensor build_tensor(const ChebyshevExpansion&, const ChebCoeffTable&, int);

private:
  std::vector<std::vector<std::vector<double>>> values_;  // [k][l][n_index]
};

CoefficientTensor build_tensor(const ChebyshevExpansion& cheb, const ChebCoeffTable& table,
                               int d);

}  // namespace hdf
