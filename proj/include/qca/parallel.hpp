#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace qca {

// Worker count for data-parallel loops; the QCA_LAB_THREADS environment
// variable caps it.
inline unsigned max_threads() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("QCA_LAB_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1 && static_cast<unsigned long>(v) < hw)
      hw = static_cast<unsigned>(v);
  }
  return hw;
}

// Runs fn(0) .. fn(count-1) on up to max_threads() workers. Callers must
// make fn(i) write only to slot i of preallocated storage so results do not
// depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  unsigned workers = max_threads();
  if (workers > count) workers = static_cast<unsigned>(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned t = 0; t < workers; ++t)
    threads.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
        fn(i);
    });
  for (auto& t : threads) t.join();
}

}  // namespace qca
