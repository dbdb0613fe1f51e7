#pragma once

#include <algorithm>
#include <cstddef>
#include <future>
#include <vector>

namespace automode::detail {

/// Calls fn(i) for i in [0, n) on up to `jobs` threads. Each index is
/// written by exactly one worker, so results match the sequential run.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::future<void>> tasks;
  const std::size_t count = std::min(workers, n);
  for (std::size_t w = 0; w < count; ++w) {
    tasks.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < n; i += count) fn(i);
    }));
  }
  for (auto& t : tasks) t.get();
}

}  // namespace automode::detail
