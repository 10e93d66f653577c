#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace lazypca {

using index_t = std::int64_t;

// Global worker count for parallel_for. 0 = use hardware concurrency.
void set_thread_count(int n);
int thread_count();

namespace detail {
int resolved_thread_count();
}

// Runs fn(i) for every i in [begin, end). Each index is processed exactly once by
// exactly one worker, and the work done for index i must not depend on any other
// index's output, so the result is identical for every thread count. Indices are
// split into contiguous ranges, ascending within each worker. `grain` is the
// minimum number of indices that justifies spawning a second worker.
template <typename F>
void parallel_for(index_t begin, index_t end, F&& fn, index_t grain = 1) {
  const index_t count = end - begin;
  if (count <= 0) return;
  int workers = detail::resolved_thread_count();
  if (workers > count / grain) workers = static_cast<int>(count / grain);
  if (workers <= 1) {
    for (index_t i = begin; i < end; ++i) fn(i);
    return;
  }
  const index_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    const index_t lo = begin + static_cast<index_t>(w) * chunk;
    const index_t hi = lo + chunk < end ? lo + chunk : end;
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (index_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace lazypca
