#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>

#include "hdf/csv.hpp"
#include "hdf/rng.hpp"
#include "oracles.hpp"

using namespace hdf;

TEST_SUITE("io") {

TEST_CASE("csv round trip at 17 significant digits") {
  Matrix M(3, 2);
  M << 1.0 / 3.0, -2.718281828459045e-5, 1e300, 0.0, -0.1, 123456789.123456789;
  const std::string path = "hdf_test_io.csv";
  write_csv(path, {"a", "b"}, M);
  CsvTable t = read_csv(path);
  CHECK(t.had_header);
  REQUIRE(t.header.size() == 2);
  CHECK(t.header[0] == "a");
  REQUIRE(t.data.rows() == 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) CHECK(t.data(i, j) == M(i, j));  // bitwise, via %.17g
  std::remove(path.c_str());
}

TEST_CASE("csv headerless detection") {
  const std::string path = "hdf_test_io2.csv";
  {
    std::ofstream os(path);
    os << "1.5,2.5\n3.5,4.5\n";
  }
  CsvTable t = read_csv(path);
  CHECK(!t.had_header);
  CHECK(t.data.rows() == 2);
  CHECK(t.data(1, 1) == 4.5);
  std::remove(path.c_str());
}

TEST_CASE("csv parse errors carry line numbers") {
  const std::string path = "hdf_test_io3.csv";
  {
    std::ofstream os(path);
    os << "x,y\n1,2\n3\n";
  }
  try {
    read_csv(path);
    FAIL("expected invalid_input");
  } catch (const invalid_input& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  std::remove(path.c_str());

  const std::string path2 = "hdf_test_io4.csv";
  {
    std::ofstream os(path2);
    os << "x,y\n1,2\n3,oops\n";
  }
  CHECK_THROWS_AS(read_csv(path2), invalid_input);
  std::remove(path2.c_str());
}

TEST_CASE("rng determinism and distribution sanity") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.uniform() == b.uniform());
  Rng c(42), d(43);
  bool differ = false;
  for (int i = 0; i < 10 && !differ; ++i) differ = c.uniform() != d.uniform();
  CHECK(differ);

  Rng n(7);
  double mean = 0.0, var = 0.0;
  const int NS = 200000;
  std::vector<double> xs(NS);
  for (int i = 0; i < NS; ++i) {
    xs[i] = n.normal();
    mean += xs[i];
  }
  mean /= NS;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= NS;
  CHECK(std::abs(mean) <= 0.01);
  CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("sample_without_replacement: distinct, in range, deterministic") {
  Rng r1(11), r2(11);
  auto s1 = r1.sample_without_replacement(100, 20);
  auto s2 = r2.sample_without_replacement(100, 20);
  CHECK(s1 == s2);
  std::set<std::size_t> uniq(s1.begin(), s1.end());
  CHECK(uniq.size() == 20);
  for (auto v : s1) CHECK(v < 100);
}

}  // TEST_SUITE
