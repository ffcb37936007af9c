#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace hdf {

// Slice [0,n) across nthreads and run fn(begin,end) on each slice.
// nthreads <= 1 runs inline. Results must be written to disjoint outputs.
template <typename Fn>
void parallel_for(std::size_t n, int nthreads, Fn&& fn) {
  if (nthreads <= 1 || n < 2) {
    fn(std::size_t{0}, n);
    return;
  }
  std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(nthreads), n);
  std::vector<std::thread> workers;
  workers.reserve(nt);
  std::size_t chunk = (n + nt - 1) / nt;
  for (std::size_t t = 0; t < nt; ++t) {
    std::size_t b = t * chunk;
    std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    workers.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& w : workers) w.join();
}

}  // namespace hdf
