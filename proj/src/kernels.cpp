#include "hdf/kernels.hpp"

#include <cmath>

namespace hdf {

KernelFamily kernel_family_from_string(const std::string& name) {
  if (name == "cauchy") return KernelFamily::cauchy;
  if (name == "gaussian") return KernelFamily::gaussian;
  if (name == "matern15") return KernelFamily::matern15;
  if (name == "matern25") return KernelFamily::matern25;
  throw invalid_input("unknown kernel '" + name + "' (expected cauchy|gaussian|matern15|matern25)");
}

std::string to_string(KernelFamily f) {
  switch (f) {
    case KernelFamily::cauchy: return "cauchy";
    case KernelFamily::gaussian: return "gaussian";
    case KernelFamily::matern15: return "matern15";
    case KernelFamily::matern25: return "matern25";
    case KernelFamily::custom: return "custom";
  }
  return "?";
}

IsotropicKernel::IsotropicKernel(KernelFamily family, double sigma)
    : family_(family), sigma_(sigma) {
  if (!(sigma > 0)) throw invalid_input("kernel: sigma must be positive");
  if (family == KernelFamily::custom)
    throw invalid_input("kernel: custom family requires an evaluator");
}

IsotropicKernel::IsotropicKernel(std::function<double(double)> evaluator, double sigma)
    : family_(KernelFamily::custom), sigma_(sigma), eval_(std::move(evaluator)) {
  if (!(sigma > 0)) throw invalid_input("kernel: sigma must be positive");
  if (!eval_) throw invalid_input("kernel: null custom evaluator");
}

double IsotropicKernel::operator()(double r) const {
  if (r < 0) throw invalid_input("kernel: negative distance");
  const double t = r / sigma_;
  switch (family_) {
    case KernelFamily::cauchy: return 1.0 / (1.0 + t * t);
    case KernelFamily::gaussian: return std::exp(-t * t);
    case KernelFamily::matern15: {
      const double u = std::sqrt(3.0) * t;
      return (1.0 + u) * std::exp(-u);
    }
    case KernelFamily::matern25: {
      const double u = std::sqrt(5.0) * t;
      return (1.0 + u + u * u / 3.0) * std::exp(-u);
    }
    case KernelFamily::custom: return eval_(r);
  }
  return 0.0;
}

IsotropicKernel IsotropicKernel::rescaled(double scale) const {
  if (!(scale > 0)) throw invalid_input("kernel: scale must be positive");
  if (family_ == KernelFamily::custom) {
    auto base = eval_;
    return IsotropicKernel([base, scale](double r) { return base(r / scale); }, sigma_ * scale);
  }
  return IsotropicKernel(family_, sigma_ * scale);
}

double kernel_eval(const IsotropicKernel& k, double r) { return k(r); }

ScaledProblem make_scaled_problem(const IsotropicKernel& kernel, const Matrix& X,
                                  const Matrix& Y) {
  if (X.rows() < 1) throw invalid_input("make_scaled_problem: empty dataset");
  const Eigen::Index d = X.cols();
  if (d < 3)
    throw unsupported_dimension("make_scaled_problem: dimension must be >= 3 (got " +
                                std::to_string(d) + ")");
  const bool same = Y.rows() == 0;
  if (!same && Y.cols() != d)
    throw invalid_input("make_scaled_problem: X and Y dimension mismatch");
  if (!X.allFinite() || (!same && !Y.allFinite()))
    throw invalid_input("make_scaled_problem: non-finite coordinates");

  const Eigen::Index n = X.rows(), m = same ? 0 : Y.rows();
  Vector center = X.colwise().sum();
  if (!same) center += Y.colwise().sum();
  center /= static_cast<double>(n + m);

  double maxnorm = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    maxnorm = std::max(maxnorm, (X.row(i).transpose() - center).norm());
  for (Eigen::Index i = 0; i < m; ++i)
    maxnorm = std::max(maxnorm, (Y.row(i).transpose() - center).norm());

  const double scale = maxnorm > 0 ? 0.5 / maxnorm : 1.0;
  ScaledProblem out{center, scale, kernel.rescaled(scale), {}, {}, same};
  out.X = (X.rowwise() - center.transpose()) * out.scale;
  if (!same) out.Y = (Y.rowwise() - center.transpose()) * out.scale;
  return out;
}

}  // namespace hdf
