#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace hometunnel::netplan {

class Ipv4Address {
public:
  constexpr Ipv4Address() = default;
  constexpr explicit Ipv4Address(std::uint32_t value) : value_(value) {}
  constexpr Ipv4Address(std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t d)
      : value_((std::uint32_t{a} << 24) | (std::uint32_t{b} << 16) | (std::uint32_t{c} << 8) | d) {}

  /// Dotted quad. Throws std::invalid_argument.
  static Ipv4Address parse(std::string_view text);
  static std::optional<Ipv4Address> try_parse(std::string_view text);

  [[nodiscard]] constexpr std::uint32_t value() const { return value_; }
  [[nodiscard]] constexpr std::uint8_t octet(int i) const {
    return static_cast<std::uint8_t>(value_ >> (8 * (3 - i)));
  }
  [[nodiscard]] std::string to_string() const;
  /// Upper-case dotted hex, e.g. "C0.A8.20.00".
  [[nodiscard]] std::string to_hex() const;

  friend constexpr auto operator<=>(Ipv4Address, Ipv4Address) = default;

private:
  std::uint32_t value_ = 0;
};

/// CIDR block whose base has all host bits clear.
class Ipv4Network {
public:
  Ipv4Network() = default;
  /// Throws std::invalid_argument on prefix > 32 or host bits set in `base`.
  Ipv4Network(Ipv4Address base, int prefix);

  /// "a.b.c.d/p"; a bare address parses as /32.
  static Ipv4Network parse(std::string_view text);

  [[nodiscard]] Ipv4Address base() const { return base_; }
  [[nodiscard]] int prefix() const { return prefix_; }
  [[nodiscard]] std::uint32_t mask() const { return mask_for(prefix_); }
  [[nodiscard]] Ipv4Address last() const { return Ipv4Address(base_.value() | ~mask()); }

  [[nodiscard]] bool contains(Ipv4Address addr) const {
    return (addr.value() & mask()) == base_.value();
  }
  [[nodiscard]] bool contains(const Ipv4Network& other) const {
    return other.prefix_ >= prefix_ && contains(other.base_);
  }
  [[nodiscard]] bool overlaps(const Ipv4Network& other) const {
    return contains(other.base_) || other.contains(base_);
  }
  [[nodiscard]] std::string to_string() const;

  static constexpr std::uint32_t mask_for(int prefix) {
    return prefix == 0 ? 0u : ~std::uint32_t{0} << (32 - prefix);
  }

  friend auto operator<=>(const Ipv4Network&, const Ipv4Network&) = default;

private:
  Ipv4Address base_;
  int prefix_ = 0;
};

}  // namespace hometunnel::netplan
