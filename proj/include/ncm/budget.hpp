#pragma once

// Node budgets for the exhaustive searches in this library.  Every search
// walks a tree and ticks the budget once per visited node; exceeding the
// limit throws BudgetExceeded rather than silently truncating results.
// The default limit can be overridden with the NCM_BUDGET environment
// variable.

#include <cstdint>
#include <cstdlib>
#include <string>

#include "ncm/errors.hpp"

namespace ncm {

class Budget {
 public:
  static std::uint64_t default_limit() {
    if (const char* env = std::getenv("NCM_BUDGET")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end && *end == '\0' && v > 0) return v;
    }
    return std::uint64_t(1) << 24;
  }

  Budget() : limit_(default_limit()) {}
  explicit Budget(std::uint64_t limit) : limit_(limit) {}

  std::uint64_t limit() const { return limit_; }
  std::uint64_t used() const { return used_; }

  void tick(std::uint64_t n = 1) {
    used_ += n;
    if (used_ > limit_)
      fail(ErrorCode::BudgetExceeded,
           "search needs more than the budget of " + std::to_string(limit_) +
               " nodes (NCM_BUDGET raises it)");
  }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

}  // namespace ncm
