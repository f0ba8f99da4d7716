#pragma once

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace smallexp {

// Worker count: explicit argument > SMALLEXP_TASKS > hardware concurrency.
inline int resolve_tasks(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SMALLEXP_TASKS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? int(hc) : 1;
}

// Runs fn(task, begin, end) over [0, n) in contiguous chunks, one thread per
// task. The chunking is a pure function of (n, tasks); callers that sort or
// concatenate task outputs in task order get deterministic results.
template <class Fn>
void parallel_chunks(int tasks, uint64_t n, Fn&& fn) {
  tasks = resolve_tasks(tasks);
  if (n == 0) return;
  if (uint64_t(tasks) > n) tasks = int(n);
  if (tasks <= 1) {
    fn(0, uint64_t(0), n);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors;
  errors.resize(size_t(tasks));
  uint64_t chunk = (n + tasks - 1) / uint64_t(tasks);
  for (int t = 0; t < tasks; ++t) {
    uint64_t begin = uint64_t(t) * chunk;
    uint64_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&, t, begin, end] {
      try {
        fn(t, begin, end);
      } catch (...) {
        errors[size_t(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace smallexp
