#pragma once

#include <vector>

#include "hdf/kernels.hpp"

namespace hdf {

// Truncated Chebyshev expansion of the even extension of a kernel on [-1,1].
// Odd coefficients vanish analytically and are zeroed after the transform.
struct ChebyshevExpansion {
  int p = 0;                   // even degree
  std::vector<double> coeffs;  // a_0..a_p

  // Evaluate sum a_i T_i(r) by Clenshaw recurrence, r in [-1,1].
  double eval(double r) const;
};

// Monomial coefficients of the Chebyshev polynomials:
// T_i(r) = sum_j t[i][j] r^j, t[i][j] = 0 when i-j is odd.
struct ChebCoeffTable {
  int p = 0;
  std::vector<std::vector<double>> t;  // lower triangular, t[i] has i+1 entries

  double operator()(int i, int j) const { return j <= i ? t[i][j] : 0.0; }
};

// Coefficients of the degree-p interpolant of the even extension, via the
// type-II DCT of kernel values at p+1 first-kind Chebyshev points.
ChebyshevExpansion cheb_transform(const IsotropicKernel& kernel, int p);

struct DegreeChoice {
  int p = 0;
  double tail = 0.0;  // sum_{i>p} |a_i| from the reference expansion
};

// Smallest even p <= 256 whose reference-expansion coefficient tail is
// <= eps/2. Throws tolerance_unreachable (carrying the best tail) otherwise.
DegreeChoice choose_degree(const IsotropicKernel& kernel, double eps);

ChebCoeffTable cheb_coeff_table(int p);

// Analytic truncation bound max|k^(p+1)| / (2^p (p+1)!), the derivative
// estimated by spectral differentiation of the reference expansion.
double chebyshev_tail_bound(const IsotropicKernel& kernel, int p);

namespace detail {
// Reference expansion: coefficients 0..511 from 512 sample points, odd and
// below-noise-floor entries zeroed. Shared by choose_degree and the bound.
std::vector<double> reference_coeffs(const IsotropicKernel& kernel);
// Chebyshev series of the derivative of the given series.
std::vector<double> differentiate(const std::vector<double>& a);
double clenshaw(const std::vector<double>& a, double r);
}  // namespace detail

}  // namespace hdf
