#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace oofa {

/**
 * Runs body(i) for i in [begin, end) on up to `threads` workers. Indices are
 * claimed atomically; callers keep results deterministic by writing only to
 * slot i inside body(i) and reducing afterwards in index order. The first
 * exception thrown by any body is rethrown on the calling thread.
 */
inline void parallel_for(int begin, int end, int threads,
                         const std::function<void(int)>& body) {
  if (threads <= 1 || end - begin <= 1) {
    for (int i = begin; i < end; ++i) body(i);
    return;
  }
  std::atomic<int> next(begin);
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= end) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        next.store(end);
        return;
      }
    }
  };
  const int nt = std::min<int>(threads, end - begin);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace oofa
