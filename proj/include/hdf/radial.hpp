#pragma once

#include "hdf/expansion.hpp"
#include "hdf/linalg.hpp"

namespace hdf {

// Compressed factors of the order-k radial matrix R^(k)_ij = r^(k)(|x_i|,|y_j|).
struct RadialFactors {
  int k = 0;
  Matrix Xbar;        // N x s_k
  Matrix Ybar;        // M x s_k (empty in the symmetric variant)
  int s_k = 0;        // retained rank, 0 drops the order entirely
  Vector sigma_kept;  // retained singular values (asymmetric variant)
  bool sym = false;
  Vector eigvals;     // signed spectrum D (symmetric variant)
};

// Vandermonde-like factors: X^(k)_il = sum_n |x_i|^n T[k, k+2l, n] (Horner in
// |x|^2), Y^(k)_il = |y_i|^(k+2l). Column l runs over the parity-admissible
// m = k, k+2, ..., p-k. Norms must lie in [0, 1/2] (scaled problem).
std::pair<Matrix, Matrix> build_radial_matrices(const CoefficientTensor& tensor, int k,
                                                const Vector& normsX, const Vector& normsY);

// Symmetric coefficient mixing S_{l,l'} = T[k, k+2l, k+2l'] with X^(k) = Y^(k) S.
Matrix radial_mixing_matrix(const CoefficientTensor& tensor, int k);

// QR both factors, SVD the small product, truncate singular values <= tau.
// ||X Y^T - Xbar Ybar^T||_2 <= tau by construction.
RadialFactors compress_radial(const Matrix& Xk, const Matrix& Yk, double tau);

// Symmetric variant: R^(k) = Q (R S R^T) Q^T, eigendecompose the middle
// matrix, truncate |lambda| <= tau, keep Xbar = Q W and the signed eigvals.
RadialFactors compress_radial_sym(const Matrix& Yk, const Matrix& mixing, double tau);

}  // namespace hdf
