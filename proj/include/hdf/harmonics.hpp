#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "hdf/linalg.hpp"

namespace hdf {

// Index chain (mu_1,...,mu_{d-2}) with k >= mu_1 >= ... >= |mu_{d-2}| >= 0.
// The sign of the last entry selects the sine branch of the azimuthal factor.
struct HarmonicIndex {
  int k = 0;
  std::vector<int> mu;
};

std::vector<HarmonicIndex> enumerate_indices(int k, int d);

// |H_k| via the counting formula binom(k+d-1,k) - binom(k+d-3,k-2).
std::uint64_t harmonic_count(int k, int d);

// Total count of harmonics of order <= kmax (telescoped form).
std::uint64_t count_up_to(int kmax, int d);

// Gegenbauer C_k^alpha(t) by the three-term recurrence; t clamped to [-1,1]
// when within 1e-12 outside. alpha must be positive.
double gegenbauer(double alpha, int k, double t);

// Real hyperspherical harmonic basis on S^{d-1}, orthonormal with respect to
// the uniform probability measure (so the k=0 harmonic is identically 1).
class HarmonicBasis {
public:
  HarmonicBasis(int d, int kmax);

  int dim() const { return d_; }
  int kmax() const { return kmax_; }
  double alpha() const { return alpha_; }

  // lexicographically ordered, enumerated lazily and cached
  const std::vector<HarmonicIndex>& indices(int k) const;
  std::uint64_t order_count(int k) const;

  // Z_k of the addition theorem sum_h Y(x)Y(y) = C_k^alpha(cos g) / Z_k
  double addition_normalizer(int k) const;

  // normalization constant of the level-j factor (j in 1..d-2): the value N
  // with N^2 * integral (sin t)^{2 mu} C_n^{lambda}(cos t)^2 (sin t)^{d-1-j} dt = 1
  double level_norm(int j, int mu, int n) const;

private:
  int d_, kmax_;
  double alpha_;
  double sqrt_surface_;  // sqrt of the surface area of S^{d-1}
  mutable std::vector<std::vector<HarmonicIndex>> cache_;
  mutable std::vector<bool> cached_;
  std::vector<std::vector<double>> norms_;  // per level, flattened (mu, n)

  friend class HarmonicWorkspace;
  std::size_t pair_index(int mu, int n) const;  // mu + n <= kmax
};

// Per-point evaluation scratch: load a point once, then any harmonic value
// costs d-2 table lookups. Reusable across points (one instance per thread).
class HarmonicWorkspace {
public:
  explicit HarmonicWorkspace(const HarmonicBasis& basis);

  void load_point(const double* x);  // x has d components; need not be unit

  double value(const HarmonicIndex& idx) const;

private:
  const HarmonicBasis& basis_;
  bool at_origin_ = false;
  std::vector<std::vector<double>> table_;  // per level, flattened (mu, n)
  std::vector<double> cosm_, sinm_;         // cos(m phi), sin(m phi)
  std::vector<double> craw_;                // scratch for the Gegenbauer recurrence
};

// Evaluate one harmonic at one point (the convenience form of the above).
double harmonic_eval(const HarmonicBasis& basis, const HarmonicIndex& idx, const Vector& x);

// Singular values (descending) of M^(k)_ij = sum_h Y_k^h(x_i) Y_k^h(x_j).
// Diagnostic only: N is capped (default 2000).
Vector harmonic_gram_spectrum(const Matrix& points, int k, Eigen::Index n_cap = 2000);

}  // namespace hdf
