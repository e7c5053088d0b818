#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hometunnel/netplan/plan.hpp"

namespace hometunnel::netplan {

struct Ipv6Prefix {
  std::array<std::uint8_t, 16> bytes{};
  int length = 0;

  /// Zero-padded groups covering the prefix, then "::/len",
  /// e.g. "fd01:2345:6789:0021::/64".
  [[nodiscard]] std::string to_string() const;

  friend auto operator<=>(const Ipv6Prefix&, const Ipv6Prefix&) = default;
};

struct Ipv6Subnet {
  std::string name;
  Ipv6Prefix prefix;
};

struct Ipv6Plan {
  Ipv6Prefix site;  // fd00::/8 + global id = /48
  std::vector<Ipv6Subnet> subnets;
};

inline constexpr std::uint64_t kMaxGlobalId = (std::uint64_t{1} << 40) - 1;

/// Unique-local mirror of an IPv4 plan. The 16-bit subnet id of every entry
/// is the third octet of its IPv4 base; /24 leaves become /64s and shorter
/// IPv4 prefixes widen accordingly (/20 -> /60, /16 -> /56), so parents keep
/// covering their children. Throws std::out_of_range for ids >= 2^40.
[[nodiscard]] Ipv6Plan derive_ipv6_plan(const SubnetPlan& plan, std::uint64_t global_id);

[[nodiscard]] nlohmann::json to_json(const Ipv6Plan& plan);

}  // namespace hometunnel::netplan
