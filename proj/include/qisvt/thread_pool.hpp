#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace qisvt {

// Worker count: QISVT_THREADS if set (>=1), else hardware_concurrency.
inline int default_thread_count() {
  if (const char* env = std::getenv("QISVT_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Run fn(0..count-1) across up to `threads` workers (atomic work stealing by
// index). fn must be safe to call concurrently for distinct indices; each
// trial owns its Rng via make_rng(seed, trial), so runs are reproducible
// regardless of the thread count. Exceptions in fn terminate (trial bodies
// catch their own).
inline void parallel_for(int count, const std::function<void(int)>& fn, int threads = 0) {
  if (threads <= 0) threads = default_thread_count();
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (std::thread& th : pool) th.join();
}

}  // namespace qisvt
