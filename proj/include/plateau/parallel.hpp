#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace plateau {

/// Execution knobs for the heavy kernels. Results never depend on `threads`.
struct Exec {
  unsigned threads = 1;
};

/// Runs body(i) for i in [begin, end), split into contiguous chunks.
/// The body must write only to locations owned by its index.
template <class Body>
void parallel_for(std::uint64_t begin, std::uint64_t end, const Exec& exec, Body&& body) {
  if (end <= begin) return;
  const std::uint64_t count = end - begin;
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, exec.threads), count));
  if (workers <= 1 || count < 64) {
    for (std::uint64_t i = begin; i < end; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::uint64_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t lo = begin + w * chunk;
    const std::uint64_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::uint64_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace plateau
