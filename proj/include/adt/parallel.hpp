#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace adt {

// Runs body(0..n-1) across worker threads. Each index owns its output slot,
// so results are identical for any thread count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                         unsigned n_threads = 0) {
  if (n == 0) return;
  unsigned hw = n_threads ? n_threads : std::thread::hardware_concurrency();
  if (hw < 2 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  hw = static_cast<unsigned>(std::min<std::size_t>(hw, n));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  workers.reserve(hw);
  for (unsigned t = 0; t < hw; ++t)
    workers.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        body(i);
      }
    });
  for (auto& w : workers) w.join();
}

}  // namespace adt
