// Exit-code contract of the CLI: 0 success, 2 invalid input, 3 numeric
// failure, 4 tolerance unreachable. Takes the binary path as argv[1].

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

namespace {
int run(const std::string& cmd) {
  const int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(rc);
}
}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: hdf_cli_errors <path-to-cli>\n";
    return 64;
  }
  const std::string cli = argv[1];
  namespace fs = std::filesystem;
  const std::string dir = "cli_errors_tmp";
  fs::remove_all(dir);
  fs::create_directories(dir);

  int failures = 0;
  auto expect = [&](const std::string& what, const std::string& cmd, int want) {
    const int got = run(cli + " " + cmd);
    const bool ok = got == want;
    std::printf("%s  %s: exit %d (want %d)\n", ok ? "PASS" : "FAIL", what.c_str(), got, want);
    if (!ok) ++failures;
  };

  expect("synth ok", "synth --n 50 --d 3 --seed 1 --out " + dir + "/p.csv", 0);
  expect("unknown kernel", "factor --points " + dir + "/p.csv --kernel rbf --out " + dir + "/f.hdf",
         2);
  expect("missing points file", "factor --points " + dir + "/missing.csv --out " + dir + "/f.hdf",
         2);
  expect("tolerance unreachable",
         "factor --points " + dir + "/p.csv --kernel cauchy --sigma 0.01 --eps 1e-300 --out " +
             dir + "/f.hdf",
         4);
  {
    std::ofstream bad(dir + "/bad.csv");
    bad << "x,y,z\n1,2,3\n4,oops,6\n";
  }
  expect("malformed csv", "factor --points " + dir + "/bad.csv --out " + dir + "/f.hdf", 2);
  // d = 2 rejected as unsupported dimension (invalid input class)
  expect("d=2 synth then factor",
         "synth --n 20 --d 2 --seed 1 --out " + dir + "/p2.csv && " + cli +
             " factor --points " + dir + "/p2.csv --out " + dir + "/f2.hdf",
         2);

  fs::remove_all(dir);
  return failures;
}
