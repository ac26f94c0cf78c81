#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace clforge {

/// Thread count from CLFORGE_THREADS, or 1 when unset or invalid.
inline unsigned default_threads() {
  if (const char* env = std::getenv("CLFORGE_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return 1;
}

/// Splits [0, n) into contiguous blocks and calls f(block, begin, end) for
/// each block on up to `threads` workers. The block layout depends only on n,
/// so callers that store per-block results and merge them in block order get
/// output independent of the thread count.
template <class F>
std::size_t parallel_blocks(std::size_t n, unsigned threads, F&& f) {
  const std::size_t blocks = std::max<std::size_t>(1, std::min<std::size_t>(n, 256));
  auto range = [&](std::size_t b) { return std::pair{n * b / blocks, n * (b + 1) / blocks}; };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(blocks)));
  if (threads == 1) {
    for (std::size_t b = 0; b < blocks; ++b) {
      auto [lo, hi] = range(b);
      f(b, lo, hi);
    }
    return blocks;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t b; (b = next.fetch_add(1)) < blocks;) {
        auto [lo, hi] = range(b);
        f(b, lo, hi);
      }
    });
  for (auto& th : pool) th.join();
  return blocks;
}

inline std::size_t block_count(std::size_t n) { return std::max<std::size_t>(1, std::min<std::size_t>(n, 256)); }

}  // namespace clforge
