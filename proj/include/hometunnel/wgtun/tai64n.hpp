#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>

#include "hometunnel/simnet/time.hpp"

namespace hometunnel::wgtun {

/// 12-byte TAI64N label: 8-byte big-endian TAI seconds (offset by 2^62)
/// followed by 4-byte big-endian nanoseconds. Byte order sorts as time does.
class Tai64n {
public:
  static constexpr std::uint64_t kEpochLabel = std::uint64_t{1} << 62;
  // TAI seconds at simulated time zero (2020-09-13T12:26:40Z plus 37 leap seconds).
  static constexpr std::uint64_t kDefaultEpochSeconds = 1'600'000'037;

  constexpr Tai64n() = default;
  /// Throws std::invalid_argument when nanoseconds >= 10^9.
  Tai64n(std::uint64_t seconds, std::uint32_t nanoseconds);

  /// Maps non-negative simulated time onto the TAI scale.
  static Tai64n from_sim(simnet::Millis now, std::uint64_t epoch_seconds = kDefaultEpochSeconds);
  static std::optional<Tai64n> decode(std::span<const std::uint8_t> bytes);

  [[nodiscard]] std::uint64_t seconds() const { return seconds_; }
  [[nodiscard]] std::uint32_t nanoseconds() const { return nanoseconds_; }
  [[nodiscard]] std::array<std::uint8_t, 12> encode() const;

  friend constexpr auto operator<=>(const Tai64n&, const Tai64n&) = default;

private:
  std::uint64_t seconds_ = 0;  // TAI seconds, label minus 2^62
  std::uint32_t nanoseconds_ = 0;
};

}  // namespace hometunnel::wgtun
