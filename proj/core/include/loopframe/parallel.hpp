#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace loopframe::parallel {

inline int default_workers() {
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs fn(i) for i in [0, count) across `workers` threads. Work is handed out
// through an atomic cursor in fixed-size blocks; callers must key any output
// by i so results do not depend on scheduling.
template <typename Fn>
void parallel_for(std::int64_t count, int workers, Fn&& fn) {
  if (count <= 0) return;
  if (workers < 1) workers = 1;
  if (workers == 1 || count == 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::int64_t block = std::max<std::int64_t>(1, count / (workers * 16));
  std::atomic<std::int64_t> cursor{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error = nullptr;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::int64_t start = cursor.fetch_add(block);
        if (start >= count) return;
        std::int64_t stop = std::min(count, start + block);
        for (std::int64_t i = start; i < stop; ++i) {
          if (failed.load(std::memory_order_relaxed)) return;
          try {
            fn(i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(err_mu);
            if (!first_error) first_error = std::current_exception();
            failed.store(true, std::memory_order_relaxed);
            return;
          }
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace loopframe::parallel
