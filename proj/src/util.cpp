// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "stitchkit/util.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace stitchkit {

std::size_t thread_cap() {
  std::size_t cap = std::thread::hardware_concurrency();
  if (cap == 0)
    cap = 1;
  if (const char *env = std::getenv("STITCHKIT_THREADS")) {
    char *end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && v >= 1 && v < cap)
      cap = v;
  }
  return cap;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn) {
  std::size_t workers = std::min(thread_cap(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
        fn(i);
    });
  for (auto &t : pool)
    t.join();
}

} // namespace stitchkit
