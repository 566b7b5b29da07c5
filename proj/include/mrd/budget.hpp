#pragma once

#include <chrono>
#include <stdexcept>
#include <string>

namespace mrd {

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Wall-clock allowance for long searches.  A default-constructed budget never
// expires.
class Budget {
 public:
  Budget() = default;
  explicit Budget(std::chrono::milliseconds limit, std::string what = "search")
      : limited_(limit.count() > 0), deadline_(std::chrono::steady_clock::now() + limit), what_(std::move(what)) {}

  static Budget seconds(double s, std::string what = "search") {
    return Budget(std::chrono::milliseconds(static_cast<long long>(s * 1000.0)), std::move(what));
  }

  bool expired() const { return limited_ && std::chrono::steady_clock::now() > deadline_; }
  void check() const {
    if (expired()) throw BudgetExceeded(what_ + ": time budget exhausted");
  }
  // Cheap variant for hot loops: only looks at the clock every 4096 calls.
  void tick() const {
    thread_local unsigned ticks = 0;
    if (limited_ && (++ticks & 0xFFF) == 0) check();
  }

 private:
  bool limited_ = false;
  std::chrono::steady_clock::time_point deadline_{};
  std::string what_ = "search";
};

}  // namespace mrd
