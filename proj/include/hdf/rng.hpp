#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace hdf {

// Deterministic RNG wrapper. std::mt19937_64 is bit-stable across platforms,
// but the standard distributions are not, so uniform/normal are implemented
// here directly. Same seed => same stream, everywhere.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; caches the second deviate.
  double normal();

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  // k distinct indices from [0, n), in draw order (partial Fisher-Yates).
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace hdf
