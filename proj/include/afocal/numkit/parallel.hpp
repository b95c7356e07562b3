#pragma once

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace afocal {

/// Worker count for per-sample loops; 1 runs inline. Each index writes only
/// its own output slot, so results do not depend on the thread count.
inline std::atomic<int>& thread_count() {
  static std::atomic<int> n{1};
  return n;
}

template <class Fn>
void parallel_for(size_t n, Fn&& fn) {
  const int threads = std::max(1, thread_count().load());
  if (threads == 1 || n < 2) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  const size_t chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace afocal
