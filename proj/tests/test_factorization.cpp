#include <doctest.h>

#include <cstdio>
#include <cstring>

#include "hdf/factorization.hpp"
#include "oracles.hpp"

using namespace hdf;

namespace {
Matrix synth_points(Eigen::Index n, Eigen::Index d, std::uint32_t seed) {
  Matrix X = oracle::random_normal(n, d, seed);
  double mx = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) mx = std::max(mx, X.row(i).norm());
  return X / mx;
}

double max_err_vs_dense(const LowRankFactorization& f, const IsotropicKernel& k, const Matrix& X,
                        const Matrix& Y) {
  Matrix K = oracle::dense_k(k, X, Y.rows() ? Y : X);
  Matrix A;
  if (f.sym)
    A = f.U * f.D.asDiagonal() * f.U.transpose();
  else
    A = f.U * f.V.transpose();
  return (K - A).cwiseAbs().maxCoeff();
}
}  // namespace

TEST_SUITE("factorization") {

TEST_CASE("exact polynomial kernel 1 - r^2 reproduced to roundoff") {
  IsotropicKernel dome([](double r) { return 1.0 - r * r; });
  Matrix X = synth_points(100, 3, 10);
  Matrix Y = synth_points(100, 3, 20);
  FactorOptions opt;
  opt.mode = TauMode::strict;
  LowRankFactorization f = factor(dome, 1e-8, X, Y, opt);
  CHECK(f.p == 2);
  CHECK(max_err_vs_dense(f, dome, X, Y) <= 1e-8);
}

TEST_CASE("cauchy strict mode meets eps on N=500, d=3") {
  IsotropicKernel cauchy(KernelFamily::cauchy, 1.0);
  Matrix X = synth_points(500, 3, 30);
  FactorOptions opt;
  opt.mode = TauMode::strict;
  LowRankFactorization f = factor(cauchy, 1e-3, X, X, opt);
  Matrix K = oracle::dense_k(cauchy, X, X);
  const double err = (K - Matrix(f.U * f.V.transpose())).cwiseAbs().maxCoeff();
  CHECK(err <= 1e-3 * K.cwiseAbs().maxCoeff());
  // error bound soundness on the same instance
  CHECK(err <= apriori_bound(f));
}

TEST_CASE("single-point datasets") {
  IsotropicKernel gauss(KernelFamily::gaussian, 1.0);
  Matrix X = Matrix::Zero(1, 3), Y = Matrix::Ones(1, 3);
  FactorOptions opt;
  opt.mode = TauMode::strict;
  LowRankFactorization f = factor(gauss, 1e-6, X, Y, opt);
  CHECK(f.U.rows() == 1);
  const double expect = gauss(std::sqrt(3.0));
  const double got = (f.U * f.V.transpose())(0, 0);
  CHECK(std::abs(got - expect) <= 1e-6);
}

TEST_CASE("rank accounting and column layout follow the (k, h, l) nest") {
  IsotropicKernel gauss(KernelFamily::gaussian, 1.0);
  Matrix X = synth_points(60, 3, 44);
  Matrix Y = synth_points(50, 3, 45);
  FactorOptions opt;
  opt.mode = TauMode::practical;
  LowRankFactorization f = factor(gauss, 1e-4, X, Y, opt);

  std::uint64_t r = 0;
  for (int k = 0; k < static_cast<int>(f.s_k.size()); ++k)
    r += harmonic_count(k, f.d) * static_cast<std::uint64_t>(f.s_k[k]);
  CHECK(r == f.rank);
  CHECK(f.U.cols() == static_cast<Eigen::Index>(r));

  // independently recompute one column: first (h, l) of the first retained order
  int k0 = -1;
  std::uint64_t offset = 0;
  for (int k = 0; k < static_cast<int>(f.s_k.size()); ++k) {
    if (f.s_k[k] > 0) {
      k0 = k;
      break;
    }
    offset += harmonic_count(k, f.d) * static_cast<std::uint64_t>(f.s_k[k]);
  }
  REQUIRE(k0 >= 0);
  ScaledProblem sp = make_scaled_problem(gauss, X, Y);
  CoefficientTensor T =
      build_tensor(cheb_transform(sp.kernel, f.p), cheb_coeff_table(f.p), f.d);
  HarmonicBasis basis(f.d, f.p / 2);
  auto [Xk, Yk] = build_radial_matrices(T, k0, Vector(sp.X.rowwise().norm()),
                                        Vector(sp.Y.rowwise().norm()));
  const double rz = std::sqrt(basis.addition_normalizer(k0));
  RadialFactors rf = compress_radial(Matrix(Xk * rz), Matrix(Yk * rz), f.budget.tau);
  REQUIRE(rf.s_k == f.s_k[k0]);
  const HarmonicIndex& h0 = basis.indices(k0)[0];
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    Vector xi = sp.X.row(i).transpose();
    const double expect = rf.Xbar(i, 0) * harmonic_eval(basis, h0, xi);
    CHECK(f.U(i, static_cast<Eigen::Index>(offset)) == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("monotonicity: smaller eps never decreases the rank") {
  IsotropicKernel m25(KernelFamily::matern25, 1.0);
  Matrix X = synth_points(150, 4, 50);
  std::uint64_t prev = 0;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    FactorOptions opt;
    opt.mode = TauMode::strict;
    LowRankFactorization f = factor(m25, eps, X, X, opt);
    CHECK(f.rank >= prev);
    prev = f.rank;
  }
}

TEST_CASE("factor_sym: constant kernel collapses to rank 1") {
  IsotropicKernel one([](double) { return 1.0; });
  Matrix X = synth_points(80, 3, 60);
  LowRankFactorization f = factor_sym(one, 1e-8, X);
  CHECK(f.rank == 1);
  Matrix A = f.U * f.D.asDiagonal() * f.U.transpose();
  CHECK((A - Matrix::Ones(80, 80)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("factor_sym gaussian d=4 meets eps; no V stored") {
  IsotropicKernel gauss(KernelFamily::gaussian, 1.0);
  Matrix X = synth_points(400, 4, 70);
  FactorOptions opt;
  opt.mode = TauMode::strict;
  LowRankFactorization f = factor_sym(gauss, 1e-4, X, opt);
  CHECK(f.sym);
  CHECK(f.V.size() == 0);
  CHECK(max_err_vs_dense(f, gauss, X, Matrix()) <= 1e-4);
}

TEST_CASE("factor_sym agrees with factor within 2 eps (strict)") {
  IsotropicKernel cauchy(KernelFamily::cauchy, 1.0);
  Matrix X = synth_points(200, 3, 80);
  const double eps = 1e-4;
  FactorOptions opt;
  opt.mode = TauMode::strict;
  LowRankFactorization fs = factor_sym(cauchy, eps, X, opt);
  LowRankFactorization fa = factor(cauchy, eps, X, X, opt);
  Matrix A = fs.U * fs.D.asDiagonal() * fs.U.transpose();
  Matrix B = fa.U * fa.V.transpose();
  CHECK((A - B).cwiseAbs().maxCoeff() <= 2 * eps);
}

TEST_CASE("factor_sym carries negative D entries for an indefinite kernel") {
  IsotropicKernel wave([](double r) { return std::cos(3.0 * r); });
  Matrix X = synth_points(120, 3, 90);
  FactorOptions opt;
  opt.mode = TauMode::practical;
  LowRankFactorization f = factor_sym(wave, 1e-6, X, opt);
  CHECK(f.D.minCoeff() < 0.0);
  CHECK(max_err_vs_dense(f, wave, X, Matrix()) <= 1e-4);
}

TEST_CASE("matvec: zero vector, empty factorization, dense agreement") {
  IsotropicKernel m25(KernelFamily::matern25, 1.0);
  Matrix X = synth_points(300, 3, 100);
  FactorOptions opt;
  opt.mode = TauMode::strict;
  const double eps = 1e-4;
  LowRankFactorization f = factor(m25, eps, X, X, opt);

  CHECK(matvec(f, Vector::Zero(300)).norm() == 0.0);

  FactorOptions drop;
  drop.tau_override = 1e12;  // truncate everything
  LowRankFactorization empty = factor(m25, 1e-2, X, X, drop);
  CHECK(empty.rank == 0);
  CHECK(matvec(empty, Vector::Ones(300)).norm() == 0.0);

  Vector w = oracle::random_vector(300, 101);
  Vector got = matvec(f, w);
  Matrix K = oracle::dense_k(m25, X, X);
  Vector expect = K * w;
  const double scale = K.cwiseAbs().maxCoeff() * w.lpNorm<1>();
  CHECK((got - expect).lpNorm<Eigen::Infinity>() <= eps * scale);

  CHECK_THROWS_AS(matvec(f, Vector::Zero(299)), invalid_input);
}

TEST_CASE("apriori bound: zero for exact polynomial at tau 0") {
  IsotropicKernel dome([](double r) { return 1.0 - r * r; });
  Matrix X = synth_points(50, 3, 110);
  FactorOptions opt;
  opt.tau_override = 0.0;
  LowRankFactorization f = factor(dome, 1e-6, X, X, opt);
  CHECK(f.budget.eps_cheb == 0.0);
  CHECK(apriori_bound(f) == 0.0);
}

TEST_CASE("bound constant in d=3 equals sum of 1/Z_k") {
  IsotropicKernel gauss(KernelFamily::gaussian, 1.0);
  Matrix X = synth_points(40, 3, 120);
  LowRankFactorization f = factor(gauss, 1e-3, X, X);
  HarmonicBasis b(3, f.p / 2);
  double expect = 0.0;
  for (int k = 0; k <= f.p / 2; ++k) expect += 1.0 / b.addition_normalizer(k);
  CHECK(f.budget.bound_constant == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("choose_tau formulas") {
  CHECK(choose_tau(1e-3, TauMode::strict, 1, 1.0) == doctest::Approx(5e-4));
  CHECK(choose_tau(1e-3, TauMode::practical, 100000, 1e6) == doctest::Approx(5e-4));
  CHECK(choose_tau(1e-2, TauMode::strict, 100, 50.0) == doctest::Approx(1e-2 / 2 / 10.0 / 50.0));
  CHECK_THROWS_AS(choose_tau(0.0, TauMode::strict, 1, 1.0), invalid_input);
}

TEST_CASE("relative_error: exact, sampled-all, and dense cross-check") {
  IsotropicKernel dome([](double r) { return 1.0 - r * r; });
  Matrix X = synth_points(200, 3, 130);
  FactorOptions opt;
  opt.mode = TauMode::strict;
  LowRankFactorization f = factor(dome, 1e-10, X, X, opt);
  const double exact = relative_error(f, dome, X, X, ErrorMode::exact);
  CHECK(exact <= 1e-12);

  IsotropicKernel cauchy(KernelFamily::cauchy, 1.0);
  LowRankFactorization g = factor(cauchy, 1e-2, X, X);
  const double ex = relative_error(g, cauchy, X, X, ErrorMode::exact);
  const double sall = relative_error(g, cauchy, X, X, ErrorMode::sampled, 200 * 200, 7);
  CHECK(sall == doctest::Approx(ex).epsilon(1e-12));
  // independent dense computation
  Matrix K = oracle::dense_k(cauchy, X, X);
  const double dense = (K - Matrix(g.U * g.V.transpose())).norm() / K.norm();
  CHECK(ex == doctest::Approx(dense).epsilon(1e-10));
  CHECK(ex >= 0.0);
}

TEST_CASE("relative_error refuses oversized exact mode") {
  IsotropicKernel gauss(KernelFamily::gaussian, 1.0);
  Matrix X = synth_points(40, 3, 140);
  LowRankFactorization f = factor(gauss, 1e-2, X, X);
  Matrix Xbig(8000, 3);
  CHECK_THROWS_AS(relative_error(f, gauss, Xbig, Xbig, ErrorMode::exact), invalid_input);
}

TEST_CASE("max_rank guard throws a clean numeric_failure") {
  IsotropicKernel cauchy(KernelFamily::cauchy, 1.0);
  Matrix X = synth_points(100, 5, 150);
  FactorOptions opt;
  opt.mode = TauMode::strict;
  opt.max_rank = 3;
  CHECK_THROWS_AS(factor(cauchy, 1e-3, X, X, opt), numeric_failure);
}

TEST_CASE("tolerance-unreachable propagates from degree selection") {
  IsotropicKernel tight(KernelFamily::cauchy, 0.01);
  Matrix X = synth_points(10, 3, 160);
  CHECK_THROWS_AS(factor(tight, 1e-300, X, X), tolerance_unreachable);
}

TEST_CASE("save/load round trip is bit exact and matvec-identical") {
  IsotropicKernel gauss(KernelFamily::gaussian, 1.0);
  Matrix X = synth_points(64, 3, 170);
  Matrix Y = synth_points(48, 3, 171);
  LowRankFactorization f = factor(gauss, 1e-3, X, Y);
  const std::string path = "hdf_test_roundtrip.bin";
  save_factorization(f, path);
  LowRankFactorization g = load_factorization(path);
  REQUIRE(g.rank == f.rank);
  REQUIRE(g.sym == f.sym);
  CHECK(std::memcmp(f.U.data(), g.U.data(), sizeof(double) * f.U.size()) == 0);
  CHECK(std::memcmp(f.V.data(), g.V.data(), sizeof(double) * f.V.size()) == 0);
  Vector w = oracle::random_vector(48, 172);
  Vector a = matvec(f, w), b = matvec(g, w);
  CHECK(std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0);
  std::remove(path.c_str());

  // symmetric variant round trip
  LowRankFactorization fs = factor_sym(gauss, 1e-3, X);
  save_factorization(fs, path);
  LowRankFactorization gs = load_factorization(path);
  REQUIRE(gs.sym);
  CHECK(std::memcmp(fs.D.data(), gs.D.data(), sizeof(double) * fs.D.size()) == 0);
  std::remove(path.c_str());
}

TEST_CASE("practical mode lands within a modest multiple of eps") {
  // measured envelope: <= 11.2x at d=3, <= 35x at d=5 (leakage scales with
  // the per-order harmonic counts, so higher d is looser)
  for (auto fam : {KernelFamily::cauchy, KernelFamily::gaussian, KernelFamily::matern15,
                   KernelFamily::matern25}) {
    IsotropicKernel k(fam, 1.0);
    for (double eps : {1e-2, 1e-3}) {
      Matrix X = synth_points(300, 3, 1000 + 21 + static_cast<int>(fam));
      LowRankFactorization f = factor(k, eps, X, X);
      EntrywiseError e = max_entrywise_error(f, k, X, Matrix());
      CHECK(e.max_abs_err <= 15.0 * eps * e.max_abs_k);
    }
  }
  IsotropicKernel gauss(KernelFamily::gaussian, 1.0);
  Matrix X5 = synth_points(300, 5, 1035);
  LowRankFactorization f5 = factor(gauss, 1e-3, X5, X5);
  EntrywiseError e5 = max_entrywise_error(f5, gauss, X5, Matrix());
  CHECK(e5.max_abs_err <= 40.0 * 1e-3 * e5.max_abs_k);
}

TEST_CASE("threads do not change the result") {
  IsotropicKernel cauchy(KernelFamily::cauchy, 1.0);
  Matrix X = synth_points(150, 4, 180);
  FactorOptions one, four;
  one.threads = 1;
  four.threads = 4;
  LowRankFactorization f1 = factor(cauchy, 1e-3, X, X, one);
  LowRankFactorization f4 = factor(cauchy, 1e-3, X, X, four);
  REQUIRE(f1.rank == f4.rank);
  CHECK(std::memcmp(f1.U.data(), f4.U.data(), sizeof(double) * f1.U.size()) == 0);
  CHECK(std::memcmp(f1.V.data(), f4.V.data(), sizeof(double) * f1.V.size()) == 0);
}

}  // TEST_SUITE
