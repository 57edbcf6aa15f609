#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace textmix {

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

/// Runs fn(begin, end, worker) over a contiguous partition of [0, count).
/// Deterministic partition: worker w gets one chunk, chunk sizes differ by
/// at most one. fn must only touch worker-local state or synchronize itself.
template <typename Fn>
inline void parallel_chunks(std::size_t count, unsigned threads, Fn&& fn) {
  threads = resolve_threads(threads);
  std::size_t workers = threads;
  if (workers > count) workers = count;
  if (count == 0) return;
  if (workers <= 1) {
    fn(std::size_t{0}, count, std::size_t{0});
    return;
  }
  std::size_t base = count / workers;
  std::size_t extra = count % workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::size_t begin = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t len = base + (w < extra ? 1 : 0);
    std::size_t end = begin + len;
    pool.emplace_back([&, begin, end, w] {
      try {
        fn(begin, end, w);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
    begin = end;
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

/// Element-wise flavor: fn(index, worker) for each index in [0, count).
template <typename Fn>
inline void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  parallel_chunks(count, threads, [&](std::size_t begin, std::size_t end, std::size_t worker) {
    for (std::size_t i = begin; i < end; ++i) fn(i, worker);
  });
}

}  // namespace textmix
