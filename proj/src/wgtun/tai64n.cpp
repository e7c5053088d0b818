#include "hometunnel/wgtun/tai64n.hpp"

#include <cmath>
#include <stdexcept>

namespace hometunnel::wgtun {

Tai64n::Tai64n(std::uint64_t seconds, std::uint32_t nanoseconds) : seconds_(seconds), nanoseconds_(nanoseconds) {
  if (nanoseconds >= 1'000'000'000u) throw std::invalid_argument("TAI64N nanoseconds out of range");
  if (seconds >= kEpochLabel) throw std::invalid_argument("TAI64N seconds out of range");
}

Tai64n Tai64n::from_sim(simnet::Millis now, std::uint64_t epoch_seconds) {
  if (now.count() < 0) throw std::invalid_argument("simulated time must be non-negative");
  const auto total_ns = static_cast<std::uint64_t>(std::floor(now.count() * 1e6));
  return {epoch_seconds + total_ns / 1'000'000'000u, static_cast<std::uint32_t>(total_ns % 1'000'000'000u)};
}

std::array<std::uint8_t, 12> Tai64n::encode() const {
  std::array<std::uint8_t, 12> out{};
  const std::uint64_t label = kEpochLabel + seconds_;
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(label >> (8 * (7 - i)));
  for (int i = 0; i < 4; ++i) out[8 + i] = static_cast<std::uint8_t>(nanoseconds_ >> (8 * (3 - i)));
  return out;
}

std::optional<Tai64n> Tai64n::decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != 12) return std::nullopt;
  std::uint64_t label = 0;
  for (int i = 0; i < 8; ++i) label = (label << 8) | bytes[i];
  std::uint32_t ns = 0;
  for (int i = 8; i < 12; ++i) ns = (ns << 8) | bytes[i];
  if (label < kEpochLabel || label - kEpochLabel >= kEpochLabel || ns >= 1'000'000'000u) return std::nullopt;
  return Tai64n(label - kEpochLabel, ns);
}

}  // namespace hometunnel::wgtun
