#pragma once

#include <functional>
#include <string>

#include "hdf/errors.hpp"
#include "hdf/linalg.hpp"

namespace hdf {

enum class KernelFamily { cauchy, gaussian, matern15, matern25, custom };

KernelFamily kernel_family_from_string(const std::string& name);
std::string to_string(KernelFamily f);

// Isotropic kernel k(r), r >= 0. Built-in families take a lengthscale sigma;
// custom kernels supply an evaluator (smoothness is the caller's problem —
// the Chebyshev tail estimate will refuse rough kernels).
class IsotropicKernel {
public:
  IsotropicKernel(KernelFamily family, double sigma);
  IsotropicKernel(std::function<double(double)> evaluator, double sigma = 1.0);

  double operator()(double r) const;

  KernelFamily family() const { return family_; }
  double sigma() const { return sigma_; }

  // Equivalent kernel after multiplying all coordinates by `scale`:
  // k'(r * scale) == k(r) exactly.
  IsotropicKernel rescaled(double scale) const;

private:
  KernelFamily family_;
  double sigma_;
  std::function<double(double)> eval_;
};

double kernel_eval(const IsotropicKernel& k, double r);

// Translation + dilation taking an arbitrary point set to the expansion's
// domain: centered at the centroid, scaled so the largest centered norm is
// 1/2 (hence every pairwise distance is <= 1), with the kernel lengthscale
// adjusted so values are preserved exactly.
struct ScaledProblem {
  Vector center;
  double scale = 1.0;
  IsotropicKernel kernel;
  Matrix X;  // N x d, scaled
  Matrix Y;  // M x d, scaled (== X when the problem is symmetric)
  bool same_xy = true;
};

// Y with zero rows means "same as X". Requires d >= 3.
ScaledProblem make_scaled_problem(const IsotropicKernel& kernel, const Matrix& X,
                                  const Matrix& Y = Matrix());

}  // namespace hdf
