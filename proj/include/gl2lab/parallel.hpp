#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gl2lab {

// Evaluates fn(0), ..., fn(n-1) on up to `workers` threads and returns the
// results in index order. The first exception thrown by any item is rethrown.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, int workers, F&& fn) {
  std::vector<T> out(n);
  std::size_t threads = std::clamp<std::size_t>(workers < 1 ? 1 : static_cast<std::size_t>(workers), 1, n ? n : 1);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  auto body = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace gl2lab
