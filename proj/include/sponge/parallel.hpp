#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace sponge {

/// Splits [0, n) into `workers` contiguous chunks and runs fn(begin, end, chunk)
/// on each, one thread per chunk. Callers write per-chunk results and combine
/// them in chunk order, so output is independent of the worker count as long
/// as the combination is order-insensitive or concatenative.
template <class Fn>
void parallel_chunks(std::size_t n, std::size_t workers, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n == 0 ? 1 : n));
  if (workers == 1) {
    fn(std::size_t{0}, n, std::size_t{0});
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t step = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = std::min(n, w * step), hi = std::min(n, lo + step);
    threads.emplace_back([&, lo, hi, w] {
      try {
        fn(lo, hi, w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Number of chunks parallel_chunks will actually use.
inline std::size_t chunk_count(std::size_t n, std::size_t workers) {
  return std::max<std::size_t>(1, std::min(workers, n == 0 ? 1 : n));
}

}  // namespace sponge
