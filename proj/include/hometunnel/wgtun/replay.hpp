#pragma once

#include <cstdint>

namespace hometunnel::wgtun {

/// Sliding 64-entry bitmap over transport counters. A counter is fresh when
/// it is above the highest seen, or within the window and not yet marked.
class ReplayWindow {
public:
  static constexpr std::uint64_t kSize = 64;

  [[nodiscard]] bool check(std::uint64_t counter) const;
  /// Marks `counter` as seen; false (and no change) when it is stale or a duplicate.
  bool accept(std::uint64_t counter);

  [[nodiscard]] std::uint64_t highest() const { return highest_; }

private:
  std::uint64_t highest_ = 0;
  std::uint64_t bitmap_ = 0;  // bit i set: highest_ - i already seen
  bool empty_ = true;
};

}  // namespace hometunnel::wgtun
