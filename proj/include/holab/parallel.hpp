#ifndef HOLAB_PARALLEL_HPP
#define HOLAB_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace holab {

/// Worker cap: HOLAB_THREADS if set, else hardware concurrency, clamped to [1, 64].
inline unsigned thread_cap() {
  if (const char* env = std::getenv("HOLAB_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 64));
    return 1;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return std::clamp(hw, 1u, 64u);
}

/// Index-parallel loop with deterministic result placement; the callable gets
/// each index exactly once. Falls back to serial for small ranges. The first
/// exception thrown by a worker is rethrown on the calling thread.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  unsigned workers = thread_cap();
  if (n == 0) return;
  if (workers <= 1 || n < 2 * workers) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  workers = std::min<std::size_t>(workers, n);
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mutex;
  std::atomic<std::size_t> next{0};
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace holab

#endif
