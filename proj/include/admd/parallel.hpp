#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <thread>
#include <utility>
#include <vector>

namespace admd::par {

inline int hardware_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

namespace detail {

inline int env_cap() {
  static const int cap = [] {
    const char* s = std::getenv("ADMD_THREADS");
    if (!s || !*s) return 0;
    int v = std::atoi(s);
    return v < 0 ? 0 : v;
  }();
  return cap;
}

inline std::atomic<int>& override_cap() {
  static std::atomic<int> cap{-1};
  return cap;
}

}  // namespace detail

/// Worker-thread budget for row-parallel operators. Resolution order:
/// programmatic override, then the ADMD_THREADS environment variable,
/// then hardware concurrency. 0 means "auto".
inline int thread_cap() {
  int cap = detail::override_cap().load(std::memory_order_relaxed);
  if (cap < 0) cap = detail::env_cap();
  if (cap == 0) cap = hardware_threads();
  return cap < 1 ? 1 : cap;
}

/// Overrides ADMD_THREADS: 1 forces serial execution, 0 forces auto,
/// -1 restores the environment default.
inline void set_thread_cap(int cap) {
  detail::override_cap().store(cap, std::memory_order_relaxed);
}

inline int thread_cap_override() {
  return detail::override_cap().load(std::memory_order_relaxed);
}

/// Restores the previous cap on scope exit.
class ThreadCapGuard {
 public:
  explicit ThreadCapGuard(int cap) : prev_(thread_cap_override()) {
    set_thread_cap(cap);
  }
  ~ThreadCapGuard() { set_thread_cap(prev_); }
  ThreadCapGuard(const ThreadCapGuard&) = delete;
  ThreadCapGuard& operator=(const ThreadCapGuard&) = delete;

 private:
  int prev_;
};

/// Runs fn(row_begin, row_end) over [0, rows). Chunks are contiguous and
/// disjoint, so the result never depends on how the range was split.
/// Small jobs (cost_hint ~ total scalar ops) run inline.
template <typename Fn>
void for_rows(int rows, std::uint64_t cost_hint, Fn&& fn) {
  int threads = thread_cap();
  if (threads > rows) threads = rows;
  if (threads <= 1 || cost_hint < (std::uint64_t{1} << 21)) {
    fn(0, rows);
    return;
  }
  std::atomic<bool> failed{false};
  std::exception_ptr err;
  auto work = [&](int b, int e) {
    try {
      fn(b, e);
    } catch (...) {
      if (!failed.exchange(true)) err = std::current_exception();
    }
  };
  const int chunk = (rows + threads - 1) / threads;
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (int t = 1; t < threads; ++t) {
    int b = t * chunk;
    int e = std::min(rows, b + chunk);
    if (b >= e) break;
    pool.emplace_back(work, b, e);
  }
  work(0, std::min(chunk, rows));
  for (auto& th : pool) th.join();
  if (failed.load()) std::rethrow_exception(err);
}

}  // namespace admd::par
