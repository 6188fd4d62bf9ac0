#ifndef COMPDIST_PARALLEL_HPP
#define COMPDIST_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace compdist {

// Runs f(i) for i in [0, n) across worker threads with dynamic stealing of
// indices. Work items must be independent; callers aggregate into
// preallocated per-index slots. Degrades to a plain loop on one core.
template <typename F>
void parallel_for(std::size_t n, F&& f, unsigned threads = 0) {
  if (threads == 0) {
    threads = std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;
  }
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const unsigned workers = static_cast<unsigned>(
      std::min<std::size_t>(threads, n));
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&]() {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        f(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace compdist

#endif
