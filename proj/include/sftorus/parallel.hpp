#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace sftorus {

/// Runs body(i) for i in [0, n) on at most `workers` threads (0: hardware
/// concurrency). The first exception, by index, is rethrown after all
/// workers finish.
template <typename Body>
void parallel_for(std::size_t n, int workers, Body&& body) {
  if (n == 0) return;
  std::size_t count = workers > 0 ? static_cast<std::size_t>(workers)
                                  : std::max(1u, std::thread::hardware_concurrency());
  count = std::min(count, n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (count == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(count);
    for (std::size_t w = 0; w < count; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace sftorus
