#ifndef PATCHWORK_DETAIL_PARALLEL_HPP_
#define PATCHWORK_DETAIL_PARALLEL_HPP_

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace patchwork::detail {

/// Runs fn(i) for i in [0, n) on `num_threads` workers (0 = hardware
/// concurrency). Work is split into contiguous chunks; as long as fn writes
/// only to slot i, the result is independent of the worker count.
template <typename Fn>
void parallel_for(std::size_t n, int num_threads, Fn&& fn) {
  if (n == 0) return;
  std::size_t workers = num_threads > 0 ? static_cast<std::size_t>(num_threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([begin, end, &fn] {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace patchwork::detail

#endif  // PATCHWORK_DETAIL_PARALLEL_HPP_
