#pragma once

#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace muforge {

// Run fn(i) for i in [0, n) on `threads` workers (inline when threads <= 1).
// The first exception thrown by any worker is rethrown on the calling thread.
// Callers own any synchronization inside fn beyond the index partition.
inline void parallel_for(long n, int threads, const std::function<void(long)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  int width = threads < n ? threads : static_cast<int>(n);
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mu;
  for (int w = 0; w < width; ++w)
    pool.emplace_back([&, w] {
      try {
        for (long i = w; i < n; i += width) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> g(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace muforge
