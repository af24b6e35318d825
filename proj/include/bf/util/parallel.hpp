#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace bf::util {

// Worker count from BF_THREADS, default 1 (fully serial).
inline int worker_count() {
  const char* env = std::getenv("BF_THREADS");
  if (!env) return 1;
  int n = std::atoi(env);
  return n < 1 ? 1 : n;
}

// Runs fn(i) for i in [0, n). Results must be written to index-addressed
// slots so the outcome is identical for any worker count.
inline void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
  const int workers = worker_count();
  if (workers <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  const size_t per = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const size_t lo = w * per;
    const size_t hi = std::min(n, lo + per);
    if (lo >= hi) break;
    threads.emplace_back([&fn, lo, hi]() {
      for (size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : threads) t.join();
}

}  // namespace bf::util
