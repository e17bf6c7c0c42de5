#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace harris {

// Number of worker threads: HARRIS_THREADS caps hardware concurrency.
inline unsigned worker_count() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("HARRIS_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && static_cast<unsigned>(cap) < n) n = static_cast<unsigned>(cap);
    if (cap >= 1 && static_cast<unsigned>(cap) > n) n = static_cast<unsigned>(cap);
  }
  return n;
}

// Runs fn(i) for i in [0, n). Results must be written by index; the static
// interleaved partition plus per-index RNG streams makes output independent
// of the schedule.
inline void for_each_replica(std::size_t n, const std::function<void(std::size_t)>& fn,
                             unsigned threads = 0) {
  if (threads == 0) threads = worker_count();
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([=, &fn]() {
      for (std::size_t i = t; i < n; i += threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace harris
