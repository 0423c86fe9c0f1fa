#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <string>

#include "nestprof/errors.hpp"

namespace nestprof {

/// Soft cap on the estimated size of mining metadata and unrolled rows.
/// Charged in coarse byte estimates at allocation-heavy points; exceeding
/// the cap throws ResourceLimitError. Thread-safe.
class MemoryBudget {
 public:
  explicit MemoryBudget(std::uint64_t limit_bytes) : limit_(limit_bytes) {}

  static std::unique_ptr<MemoryBudget> from_env(const char* var = "NESTPROF_MAX_MEM_MB") {
    const char* raw = std::getenv(var);
    if (!raw || !*raw) return nullptr;
    char* end = nullptr;
    const unsigned long long mb = std::strtoull(raw, &end, 10);
    if (end == raw || *end != '\0')
      throw Error(std::string(var) + " must be an integer (megabytes)");
    return std::make_unique<MemoryBudget>(static_cast<std::uint64_t>(mb) * 1024 * 1024);
  }

  void charge(std::uint64_t bytes) {
    const std::uint64_t now = used_.fetch_add(bytes, std::memory_order_relaxed) + bytes;
    if (now > limit_)
      throw ResourceLimitError("memory budget exceeded (" + std::to_string(now / (1024 * 1024)) +
                               " MB used, limit " + std::to_string(limit_ / (1024 * 1024)) +
                               " MB)");
  }

  std::uint64_t used() const noexcept { return used_.load(std::memory_order_relaxed); }
  std::uint64_t limit() const noexcept { return limit_; }

 private:
  std::uint64_t limit_;
  std::atomic<std::uint64_t> used_{0};
};

/// Charges `bytes` when a budget is configured.
inline void charge_budget(MemoryBudget* budget, std::uint64_t bytes) {
  if (budget) budget->charge(bytes);
}

}  // namespace nestprof
