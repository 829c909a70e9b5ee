#ifndef BLIFT_PARALLEL_H_
#define BLIFT_PARALLEL_H_

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace blift {

// Runs fn(i) for every i in [0, n) on up to `workers` threads. Indices are
// split into contiguous blocks, so callers that write result[i] get output
// independent of the worker count. The first exception thrown by any task is
// rethrown on the calling thread after all workers have joined.
template <typename Fn>
void ParallelFor(std::size_t n, int workers, Fn&& fn) {
  const std::size_t threads =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(workers, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::size_t block = (n + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t begin = t * block;
    const std::size_t end = std::min(n, begin + block);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

template <typename T, typename Fn>
auto ParallelMap(const std::vector<T>& items, int workers, Fn&& fn) {
  using R = decltype(fn(items.front()));
  std::vector<R> out(items.size());
  ParallelFor(items.size(), workers,
              [&](std::size_t i) { out[i] = fn(items[i]); });
  return out;
}

}  // namespace blift

#endif  // BLIFT_PARALLEL_H_
