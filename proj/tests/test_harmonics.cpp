#include <doctest.h>

#include <set>

#include "hdf/expansion.hpp"
#include "hdf/harmonics.hpp"
#include "oracles.hpp"

using namespace hdf;

TEST_SUITE("harmonics") {

TEST_CASE("enumeration: d=3 orders") {
  auto h1 = enumerate_indices(1, 3);
  REQUIRE(h1.size() == 3);
  CHECK(h1[0].mu == std::vector<int>{-1});
  CHECK(h1[1].mu == std::vector<int>{0});
  CHECK(h1[2].mu == std::vector<int>{1});
  CHECK(enumerate_indices(2, 3).size() == 5);
  CHECK(enumerate_indices(2, 5).size() == 14);
}

TEST_CASE("counts match enumeration for k <= 12, d <= 8") {
  for (int d = 3; d <= 8; ++d) {
    std::uint64_t total = 0;
    for (int k = 0; k <= 12; ++k) {
      auto idx = enumerate_indices(k, d);
      CHECK(idx.size() == harmonic_count(k, d));
      // chain validity + uniqueness
      std::set<std::vector<int>> uniq;
      for (const auto& h : idx) {
        int prev = k;
        for (std::size_t j = 0; j < h.mu.size(); ++j) {
          const int v = j + 1 == h.mu.size() ? std::abs(h.mu[j]) : h.mu[j];
          CHECK(v <= prev);
          CHECK(v >= 0);
          prev = v;
        }
        uniq.insert(h.mu);
      }
      CHECK(uniq.size() == idx.size());
      total += idx.size();
      CHECK(count_up_to(k, d) == total);
    }
  }
}

TEST_CASE("count formulas: closed-form values") {
  CHECK(count_up_to(0, 5) == 1);
  CHECK(count_up_to(2, 3) == 9);
  CHECK(count_up_to(3, 4) == 30);  // C(6,3) + C(5,3)
}

TEST_CASE("gegenbauer closed forms") {
  CHECK(gegenbauer(0.5, 0, 0.37) == 1.0);
  CHECK(gegenbauer(1.0, 1, 0.5) == doctest::Approx(1.0));
  CHECK(gegenbauer(1.0, 2, 0.5) == doctest::Approx(0.0));  // 4t^2 - 1
  // Legendre at alpha = 1/2: C_3^{1/2}(t) = (5t^3 - 3t)/2
  const double t = -0.62;
  CHECK(gegenbauer(0.5, 3, t) == doctest::Approx((5 * t * t * t - 3 * t) / 2).epsilon(1e-13));
  CHECK_THROWS_AS(gegenbauer(0.0, 2, 0.1), unsupported_dimension);
  CHECK_THROWS_AS(gegenbauer(0.5, 2, 1.5), invalid_input);
}

TEST_CASE("gegenbauer bounded by C(k+d-3, k) on [-1,1]") {
  for (int d : {3, 5, 8}) {
    const double alpha = d / 2.0 - 1.0;
    for (int k = 0; k <= 20; ++k) {
      const double bound = static_cast<double>(binomial(k + d - 3, k));
      for (int g = 0; g < 1000; ++g) {
        const double tt = -1.0 + 2.0 * g / 999.0;
        CHECK(std::abs(gegenbauer(alpha, k, tt)) <= bound * (1 + 1e-12));
      }
    }
  }
}

TEST_CASE("k=0 harmonic is the constant 1") {
  for (int d : {3, 4, 7}) {
    HarmonicBasis b(d, 2);
    const auto& h0 = b.indices(0);
    REQUIRE(h0.size() == 1);
    Vector x = oracle::random_unit(d, 11) * 0.3;
    CHECK(harmonic_eval(b, h0[0], x) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(harmonic_eval(b, h0[0], Vector::Zero(d)) == 1.0);
  }
}

TEST_CASE("origin convention for k >= 1") {
  HarmonicBasis b(4, 3);
  for (int k = 1; k <= 3; ++k)
    for (const auto& h : b.indices(k)) CHECK(harmonic_eval(b, h, Vector::Zero(4)) == 0.0);
}

TEST_CASE("d=3, k=1 harmonics span sqrt(3) * coordinates") {
  HarmonicBasis b(3, 1);
  const auto& hs = b.indices(1);
  // evaluate on 100 directions and least-squares fit against coordinates
  Matrix E(100, 3), C(100, 3);
  for (int t = 0; t < 100; ++t) {
    Vector x = oracle::random_unit(3, 500 + t);
    for (int j = 0; j < 3; ++j) E(t, j) = harmonic_eval(b, hs[j], x);
    C.row(t) = x.transpose();
  }
  Matrix coef = (C.transpose() * C).ldlt().solve(C.transpose() * E);
  CHECK((C * coef - E).cwiseAbs().maxCoeff() <= 1e-10);
  // each harmonic is sqrt(3) times a single coordinate (up to sign/permutation)
  for (int j = 0; j < 3; ++j)
    CHECK(coef.col(j).cwiseAbs().maxCoeff() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-10));
}

TEST_CASE("addition theorem holds for k <= 10, d in 3..6") {
  for (int d : {3, 4, 5, 6}) {
    HarmonicBasis b(d, 10);
    const double alpha = d / 2.0 - 1.0;
    double worst = 0.0;
    HarmonicWorkspace wx(b), wy(b);
    for (int t = 0; t < 100; ++t) {
      Vector x = oracle::random_unit(d, 1000 + 7 * d + t);
      Vector y = oracle::random_unit(d, 5000 + 11 * d + t);
      wx.load_point(x.data());
      wy.load_point(y.data());
      const double cosg = x.dot(y);
      for (int k = 0; k <= 10; ++k) {
        double s = 0.0;
        for (const auto& h : b.indices(k)) s += wx.value(h) * wy.value(h);
        const double rhs = gegenbauer(alpha, k, cosg) / b.addition_normalizer(k);
        worst = std::max(worst, std::abs(s - rhs));
      }
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("addition normalizer closed forms") {
  HarmonicBasis b3(3, 4);
  CHECK(b3.addition_normalizer(0) == doctest::Approx(1.0));
  CHECK(b3.addition_normalizer(1) == doctest::Approx(1.0 / 3.0));
  CHECK(b3.addition_normalizer(2) == doctest::Approx(1.0 / 5.0));
  HarmonicBasis b5(5, 2);
  CHECK(b5.addition_normalizer(2) == doctest::Approx(6.0 / 14.0));
}

TEST_CASE("rotation invariance of the order sums") {
  const int d = 4;
  HarmonicBasis b(d, 5);
  // Householder reflection as the rotation-like orthogonal map (det -1 is
  // fine: only cos(angle) enters the sums)
  Vector v = oracle::random_unit(d, 99);
  Matrix R = Matrix::Identity(d, d) - 2.0 * v * v.transpose();
  HarmonicWorkspace w1(b), w2(b);
  for (int t = 0; t < 20; ++t) {
    Vector x = oracle::random_unit(d, 600 + t);
    Vector y = oracle::random_unit(d, 800 + t);
    for (int k = 0; k <= 5; ++k) {
      double s1 = 0.0, s2 = 0.0;
      w1.load_point(x.data());
      w2.load_point(y.data());
      for (const auto& h : b.indices(k)) s1 += w1.value(h) * w2.value(h);
      Vector rx = R * x, ry = R * y;
      w1.load_point(rx.data());
      w2.load_point(ry.data());
      for (const auto& h : b.indices(k)) s2 += w1.value(h) * w2.value(h);
      CHECK(std::abs(s1 - s2) <= 1e-10);
    }
  }
}

TEST_CASE("Monte-Carlo orthonormality, d=4 orders <= 4") {
  const int d = 4, kmax = 4, nsamp = 200000;
  HarmonicBasis b(d, kmax);
  std::vector<const HarmonicIndex*> all;
  for (int k = 0; k <= kmax; ++k)
    for (const auto& h : b.indices(k)) all.push_back(&h);
  const int H = static_cast<int>(all.size());
  Matrix G = Matrix::Zero(H, H);
  HarmonicWorkspace ws(b);
  Vector vals(H);
  Matrix X = oracle::random_normal(nsamp, d, 4242);
  for (int s = 0; s < nsamp; ++s) {
    Vector x = X.row(s).transpose();
    ws.load_point(x.data());
    for (int i = 0; i < H; ++i) vals[i] = ws.value(*all[i]);
    G.selfadjointView<Eigen::Lower>().rankUpdate(vals);
  }
  Matrix Gf = Matrix(G.selfadjointView<Eigen::Lower>()) / static_cast<double>(nsamp);
  CHECK((Gf - Matrix::Identity(H, H)).cwiseAbs().maxCoeff() <= 2e-2);
}

TEST_CASE("gram spectrum: k=0 rank one, d=3 k=2 rank five") {
  Matrix X3 = oracle::random_normal(500, 3, 314);
  Vector s0 = harmonic_gram_spectrum(X3, 0);
  CHECK(s0[0] == doctest::Approx(500.0).epsilon(1e-12));
  CHECK(s0[1] <= 1e-10 * s0[0]);

  Vector s2 = harmonic_gram_spectrum(X3, 2);
  int numrank = 0;
  for (Eigen::Index i = 0; i < s2.size(); ++i)
    if (s2[i] > 1e-10 * s2[0]) ++numrank;
  CHECK(numrank == 5);
}

TEST_CASE("gram spectrum: high-d decay (measured calibration)") {
  Matrix X20 = oracle::random_normal(500, 20, 315);
  Vector s = harmonic_gram_spectrum(X20, 2);
  // |H_2| = 209 < N: moderate decay, full numerical rank (measured ~0.78)
  CHECK(harmonic_count(2, 20) == 209);
  CHECK(s[13] / s[0] < 0.85);
  CHECK(s[13] / s[0] > 0.5);
  int numrank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > 1e-10 * s[0]) ++numrank;
  CHECK(numrank == 209);

  // |H_4| = 8645 >> N: the rank-deficient fast-decay regime
  Vector s4 = harmonic_gram_spectrum(X20, 4);
  CHECK(harmonic_count(4, 20) == 8645);
  int numrank4 = 0;
  for (Eigen::Index i = 0; i < s4.size(); ++i)
    if (s4[i] > 1e-10 * s4[0]) ++numrank4;
  CHECK(static_cast<std::uint64_t>(numrank4) < harmonic_count(4, 20));
}

TEST_CASE("gram spectrum refuses above the diagnostic cap") {
  Matrix X = oracle::random_normal(2100, 3, 1);
  CHECK_THROWS_AS(harmonic_gram_spectrum(X, 1), invalid_input);
}

TEST_CASE("d < 3 rejected") {
  CHECK_THROWS_AS(enumerate_indices(2, 2), unsupported_dimension);
  CHECK_THROWS_AS(HarmonicBasis(2, 3), unsupported_dimension);
}

}  // TEST_SUITE
