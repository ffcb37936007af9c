#include "hdf/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace hdf {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {
std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

bool parse_double(const std::string& s, double& out) {
  const char* b = s.c_str();
  char* end = nullptr;
  out = std::strtod(b, &end);
  if (end == b) return false;
  while (*end == ' ' || *end == '\t') ++end;
  return *end == '\0';
}
}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw invalid_input("read_csv: cannot open " + path);
  CsvTable t;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0, width = 0;
  bool first = true;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    std::vector<std::string> cells = split_line(line);
    if (first) {
      first = false;
      width = cells.size();
      std::vector<double> vals(width);
      bool numeric = true;
      for (std::size_t i = 0; i < width; ++i)
        if (!parse_double(cells[i], vals[i])) {
          numeric = false;
          break;
        }
      if (numeric) {
        rows.push_back(std::move(vals));
      } else {
        t.had_header = true;
        t.header = std::move(cells);
      }
      continue;
    }
    if (cells.size() != width)
      throw invalid_input("read_csv: " + path + " line " + std::to_string(lineno) + " has " +
                          std::to_string(cells.size()) + " fields, expected " +
                          std::to_string(width));
    std::vector<double> vals(width);
    for (std::size_t i = 0; i < width; ++i)
      if (!parse_double(cells[i], vals[i]))
        throw invalid_input("read_csv: " + path + " line " + std::to_string(lineno) +
                            ": non-numeric field '" + cells[i] + "'");
    rows.push_back(std::move(vals));
  }
  t.data.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j)
      t.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return t;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Matrix& data) {
  std::ofstream os(path);
  if (!os) throw invalid_input("write_csv: cannot open " + path);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) os << ',';
    os << header[i];
  }
  os << '\n';
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
      if (j) os << ',';
      os << format_g17(data(i, j));
    }
    os << '\n';
  }
  if (!os) throw invalid_input("write_csv: write failed on " + path);
}

}  // namespace hdf
