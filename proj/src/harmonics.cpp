#include "hdf/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hdf/errors.hpp"
#include "hdf/expansion.hpp"

namespace hdf {

namespace {

void check_dim(int d, const char* who) {
  if (d < 3)
    throw unsupported_dimension(std::string(who) + ": dimension must be >= 3 (got " +
                                std::to_string(d) + ")");
}

void enumerate_rec(int bound, int slots, std::vector<int>& prefix,
                   std::vector<std::vector<int>>& out) {
  if (slots == 1) {
    for (int m = -bound; m <= bound; ++m) {
      prefix.push_back(m);
      out.push_back(prefix);
      prefix.pop_back();
    }
    return;
  }
  for (int m = 0; m <= bound; ++m) {
    prefix.push_back(m);
    enumerate_rec(m, slots - 1, prefix, out);
    prefix.pop_back();
  }
}

// log of int_{-1}^{1} C_n^lam(t)^2 (1-t^2)^{lam-1/2} dt
double log_gegen_norm(int n, double lam) {
  return std::log(M_PI) + (1.0 - 2.0 * lam) * std::log(2.0) + std::lgamma(n + 2.0 * lam) -
         std::lgamma(n + 1.0) - std::log(n + lam) - 2.0 * std::lgamma(lam);
}

}  // namespace

std::vector<HarmonicIndex> enumerate_indices(int k, int d) {
  check_dim(d, "enumerate_indices");
  if (k < 0) throw invalid_input("enumerate_indices: negative order");
  std::vector<std::vector<int>> chains;
  std::vector<int> prefix;
  enumerate_rec(k, d - 2, prefix, chains);
  std::sort(chains.begin(), chains.end());
  std::vector<HarmonicIndex> out;
  out.reserve(chains.size());
  for (auto& c : chains) out.push_back({k, std::move(c)});
  return out;
}

std::uint64_t harmonic_count(int k, int d) {
  check_dim(d, "harmonic_count");
  if (k == 0) return 1;
  std::uint64_t a = binomial(k + d - 1, k);
  std::uint64_t b = k >= 2 ? binomial(k + d - 3, k - 2) : 0;
  return a - b;
}

std::uint64_t count_up_to(int kmax, int d) {
  check_dim(d, "count_up_to");
  return binomial(kmax + d - 1, d - 1) + binomial(kmax + d - 2, d - 1);
}

double gegenbauer(double alpha, int k, double t) {
  if (!(alpha > 0)) throw unsupported_dimension("gegenbauer: alpha must be positive");
  if (std::abs(t) > 1.0 + 1e-12) throw invalid_input("gegenbauer: |t| > 1");
  t = std::clamp(t, -1.0, 1.0);
  if (k == 0) return 1.0;
  double cm2 = 1.0, cm1 = 2.0 * alpha * t;
  for (int n = 2; n <= k; ++n) {
    double c = (2.0 * t * (n + alpha - 1.0) * cm1 - (n + 2.0 * alpha - 2.0) * cm2) / n;
    cm2 = cm1;
    cm1 = c;
  }
  return cm1;
}

std::size_t HarmonicBasis::pair_index(int mu, int n) const {
  // rows mu = 0..kmax, row mu holds n = 0..kmax-mu
  return static_cast<std::size_t>(mu) * (kmax_ + 1) - static_cast<std::size_t>(mu) * (mu - 1) / 2 +
         static_cast<std::size_t>(n);
}

HarmonicBasis::HarmonicBasis(int d, int kmax) : d_(d), kmax_(kmax), alpha_(d / 2.0 - 1.0) {
  check_dim(d, "HarmonicBasis");
  if (kmax < 0) throw invalid_input("HarmonicBasis: negative kmax");
  cache_.resize(kmax + 1);
  cached_.assign(kmax + 1, false);
  const double log_surface =
      std::log(2.0) + (d / 2.0) * std::log(M_PI) - std::lgamma(d / 2.0);
  sqrt_surface_ = std::exp(0.5 * log_surface);
  const std::size_t pairs = static_cast<std::size_t>(kmax + 1) * (kmax + 2) / 2;
  norms_.resize(d - 2);
  for (int j = 1; j <= d - 2; ++j) {
    auto& lv = norms_[j - 1];
    lv.assign(pairs, 0.0);
    for (int mu = 0; mu <= kmax; ++mu) {
      const double lam = mu + (d - j - 1) / 2.0;
      for (int n = 0; n + mu <= kmax; ++n)
        lv[pair_index(mu, n)] = std::exp(-0.5 * log_gegen_norm(n, lam));
    }
  }
}

const std::vector<HarmonicIndex>& HarmonicBasis::indices(int k) const {
  if (k < 0 || k > kmax_) throw invalid_input("HarmonicBasis: order out of range");
  if (!cached_[k]) {
    cache_[k] = enumerate_indices(k, d_);
    cached_[k] = true;
  }
  return cache_[k];
}

std::uint64_t HarmonicBasis::order_count(int k) const { return harmonic_count(k, d_); }

double HarmonicBasis::addition_normalizer(int k) const {
  if (k < 0 || k > kmax_) throw invalid_input("addition_normalizer: order out of range");
  // C_k^alpha(1) = binom(k + d - 3, k), divided by |H_k|
  return static_cast<double>(binomial(k + d_ - 3, k)) / static_cast<double>(order_count(k));
}

double HarmonicBasis::level_norm(int j, int mu, int n) const {
  return norms_[j - 1][pair_index(mu, n)];
}

HarmonicWorkspace::HarmonicWorkspace(const HarmonicBasis& basis) : basis_(basis) {
  const int kmax = basis.kmax_;
  const std::size_t pairs = static_cast<std::size_t>(kmax + 1) * (kmax + 2) / 2;
  table_.assign(basis.d_ - 2, std::vector<double>(pairs, 0.0));
  cosm_.assign(kmax + 1, 0.0);
  sinm_.assign(kmax + 1, 0.0);
  craw_.assign(kmax + 1, 0.0);
}

void HarmonicWorkspace::load_point(const double* x) {
  const int d = basis_.d_;
  const int kmax = basis_.kmax_;
  double nrm2 = 0.0;
  for (int i = 0; i < d; ++i) nrm2 += x[i] * x[i];
  if (nrm2 == 0.0) {
    at_origin_ = true;
    return;
  }
  at_origin_ = false;
  const double inv = 1.0 / std::sqrt(nrm2);

  // prefix norms rho[m] = ||u_0..m-1||, u = x/|x|
  std::vector<double> rho(d + 1, 0.0);
  double acc = 0.0;
  for (int i = 0; i < d; ++i) {
    const double u = x[i] * inv;
    acc += u * u;
    rho[i + 1] = std::sqrt(acc);
  }

  for (int j = 1; j <= d - 2; ++j) {
    const int c = d - j;  // 0-based coordinate of this level's cosine
    double ct, st;
    if (rho[c + 1] > 0) {
      ct = x[c] * inv / rho[c + 1];
      st = rho[c] / rho[c + 1];
    } else {
      ct = 1.0;
      st = 0.0;
    }
    ct = std::clamp(ct, -1.0, 1.0);
    auto& tab = table_[j - 1];
    // powers of sin(theta), raw Gegenbauer values, then per-(mu,n) norms
    double sinpow = 1.0;
    for (int mu = 0; mu <= kmax; ++mu) {
      const double lam = mu + (d - j - 1) / 2.0;
      const int nmax = kmax - mu;
      craw_[0] = 1.0;
      if (nmax >= 1) craw_[1] = 2.0 * lam * ct;
      for (int n = 2; n <= nmax; ++n)
        craw_[n] = (2.0 * ct * (n + lam - 1.0) * craw_[n - 1] - (n + 2.0 * lam - 2.0) * craw_[n - 2]) /
                   n;
      const std::size_t base = basis_.pair_index(mu, 0);
      for (int n = 0; n <= nmax; ++n)
        tab[base + n] = sinpow * craw_[n] * basis_.norms_[j - 1][base + n];
      sinpow *= st;
    }
  }

  // azimuth multiples
  double cphi = 1.0, sphi = 0.0;
  if (rho[2] > 0) {
    cphi = x[0] * inv / rho[2];
    sphi = x[1] * inv / rho[2];
  }
  cosm_[0] = 1.0;
  sinm_[0] = 0.0;
  if (kmax >= 1) {
    cosm_[1] = cphi;
    sinm_[1] = sphi;
    for (int m = 2; m <= kmax; ++m) {
      cosm_[m] = 2.0 * cphi * cosm_[m - 1] - cosm_[m - 2];
      sinm_[m] = 2.0 * cphi * sinm_[m - 1] - sinm_[m - 2];
    }
  }
}

double HarmonicWorkspace::value(const HarmonicIndex& idx) const {
  if (at_origin_) return idx.k == 0 ? 1.0 : 0.0;
  const int d = basis_.d_;
  double v = basis_.sqrt_surface_;
  int mu_prev = idx.k;
  for (int j = 1; j <= d - 2; ++j) {
    const int mu = std::abs(idx.mu[j - 1]);
    v *= table_[j - 1][basis_.pair_index(mu, mu_prev - mu)];
    mu_prev = mu;
  }
  const int last = idx.mu[d - 3];
  if (last == 0)
    v *= 1.0 / std::sqrt(2.0 * M_PI);
  else if (last > 0)
    v *= cosm_[last] / std::sqrt(M_PI);
  else
    v *= sinm_[-last] / std::sqrt(M_PI);
  return v;
}

double harmonic_eval(const HarmonicBasis& basis, const HarmonicIndex& idx, const Vector& x) {
  if (x.size() != basis.dim()) throw invalid_input("harmonic_eval: dimension mismatch");
  HarmonicWorkspace ws(basis);
  ws.load_point(x.data());
  return ws.value(idx);
}

Vector harmonic_gram_spectrum(const Matrix& points, int k, Eigen::Index n_cap) {
  const Eigen::Index N = points.rows();
  if (N > n_cap)
    throw invalid_input("harmonic_gram_spectrum: N = " + std::to_string(N) +
                        " exceeds the diagnostic bound " + std::to_string(n_cap));
  HarmonicBasis basis(static_cast<int>(points.cols()), k);
  const auto& idx = basis.indices(k);
  Matrix F(N, static_cast<Eigen::Index>(idx.size()));
  HarmonicWorkspace ws(basis);
  for (Eigen::Index i = 0; i < N; ++i) {
    Vector xi = points.row(i).transpose();
    ws.load_point(xi.data());
    for (std::size_t h = 0; h < idx.size(); ++h) F(i, static_cast<Eigen::Index>(h)) = ws.value(idx[h]);
  }
  // M = F F^T is PSD; its singular values are the eigenvalues of F F^T
  EigSymResult es = eig_sym(Matrix(F * F.transpose()));
  Vector sv = es.values.cwiseMax(0.0);
  std::sort(sv.data(), sv.data() + sv.size(), std::greater<double>());
  return sv;
}

}  // namespace hdf
