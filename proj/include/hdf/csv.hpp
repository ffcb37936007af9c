#pragma once

#include <string>
#include <vector>

#include "hdf/linalg.hpp"

namespace hdf {

struct CsvTable {
  std::vector<std::string> header;  // empty when the file had none
  Matrix data;
  bool had_header = false;
};

// Numeric CSV with optional header (auto-detected by a non-numeric first
// row). Ragged or non-numeric rows raise invalid_input naming the line.
CsvTable read_csv(const std::string& path);

// Header row plus data at 17 significant digits (lossless round trip).
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Matrix& data);

std::string format_g17(double v);

}  // namespace hdf
