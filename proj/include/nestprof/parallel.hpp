#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace nestprof {

/// Splits [0, n) into at most `threads` contiguous ranges and runs
/// fn(worker, begin, end) on each, joining before returning. With one
/// worker (or tiny n) everything runs inline. The first exception thrown
/// by any worker is rethrown here.
///
/// Callers are responsible for determinism: per-worker results must merge
/// into an order-independent whole (set unions, keyed maps, ranges that
/// concatenate back in index order).
inline void parallel_for_ranges(std::size_t n, int threads,
                                const std::function<void(int, std::size_t, std::size_t)>& fn) {
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  if (workers == 1) {
    if (n > 0) fn(0, 0, n);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  const std::size_t chunk = (n + static_cast<std::size_t>(workers) - 1) /
                            static_cast<std::size_t>(workers);
  for (int w = 0; w < workers; ++w) {
    const std::size_t begin = static_cast<std::size_t>(w) * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, w, begin, end] {
      try {
        fn(w, begin, end);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace nestprof
