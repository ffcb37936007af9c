#pragma once

#include <stdexcept>
#include <string>

namespace hdf {

// Error taxonomy shared across the library. The CLI maps these onto its
// exit codes: invalid_input -> 2, numeric_failure -> 3,
// tolerance_unreachable -> 4.

class invalid_input : public std::runtime_error {
public:
  explicit invalid_input(const std::string& msg) : std::runtime_error(msg) {}
};

class unsupported_dimension : public invalid_input {
public:
  explicit unsupported_dimension(const std::string& msg) : invalid_input(msg) {}
};

class numeric_failure : public std::runtime_error {
public:
  explicit numeric_failure(const std::string& msg) : std::runtime_error(msg) {}
};

class tolerance_unreachable : public std::runtime_error {
public:
  tolerance_unreachable(const std::string& msg, double best_tail)
      : std::runtime_error(msg), best_tail(best_tail) {}
  double best_tail;  // smallest coefficient tail achievable at the reference degree
};

}  // namespace hdf
