#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rotvec {

// Worker count used when an options struct leaves `jobs` at 0.
inline std::size_t& default_jobs_slot() {
  static std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
  return jobs;
}
inline std::size_t default_jobs() { return default_jobs_slot(); }
inline void set_default_jobs(std::size_t jobs) { default_jobs_slot() = std::max<std::size_t>(1, jobs); }

inline std::size_t resolve_jobs(std::size_t jobs) { return jobs == 0 ? default_jobs() : jobs; }

// Runs fn(i) for i in [0, n). Work items must write to disjoint outputs;
// callers reduce afterwards in index order so results never depend on the
// worker count.
template <class Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn&& fn) {
  jobs = std::min(resolve_jobs(jobs), n);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) pool.emplace_back(worker);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace rotvec
