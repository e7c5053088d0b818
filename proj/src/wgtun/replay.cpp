#include "hometunnel/wgtun/replay.hpp"

namespace hometunnel::wgtun {

bool ReplayWindow::check(std::uint64_t counter) const {
  if (empty_ || counter > highest_) return true;
  const std::uint64_t age = highest_ - counter;
  if (age >= kSize) return false;
  return ((bitmap_ >> age) & 1u) == 0;
}

bool ReplayWindow::accept(std::uint64_t counter) {
  if (!check(counter)) return false;
  if (empty_) {
    highest_ = counter;
    bitmap_ = 1;
    empty_ = false;
  } else if (counter > highest_) {
    const std::uint64_t shift = counter - highest_;
    bitmap_ = shift >= kSize ? 0 : bitmap_ << shift;
    bitmap_ |= 1;
    highest_ = counter;
  } else {
    bitmap_ |= std::uint64_t{1} << (highest_ - counter);
  }
  return true;
}

}  // namespace hometunnel::wgtun
