#include "hometunnel/netplan/ipv6.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace hometunnel::netplan {

std::string Ipv6Prefix::to_string() const {
  const int groups = std::max(1, (length + 15) / 16);
  std::string out;
  for (int g = 0; g < groups; ++g) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%02x%02x", bytes[2 * g], bytes[2 * g + 1]);
    if (g > 0) out += ':';
    out += buf;
  }
  if (groups < 8) out += "::";
  return out + "/" + std::to_string(length);
}

Ipv6Plan derive_ipv6_plan(const SubnetPlan& plan, std::uint64_t global_id) {
  if (global_id > kMaxGlobalId) {
    throw std::out_of_range("ULA global id must fit in 40 bits");
  }
  Ipv6Plan out;
  out.site.bytes[0] = 0xfd;
  for (int i = 0; i < 5; ++i) {
    out.site.bytes[1 + i] = static_cast<std::uint8_t>(global_id >> (8 * (4 - i)));
  }
  out.site.length = 48;

  for (const auto& s : plan.subnets()) {
    const int v4_prefix = s.network.prefix();
    if (v4_prefix < 16 || v4_prefix > 24) {
      throw std::invalid_argument(s.name + ": only /16../24 IPv4 subnets map onto the third-octet scheme");
    }
    Ipv6Subnet entry{s.name, out.site};
    entry.prefix.bytes[6] = 0;
    entry.prefix.bytes[7] = s.network.base().octet(2);
    entry.prefix.length = 64 - (24 - v4_prefix);
    out.subnets.push_back(std::move(entry));
  }
  return out;
}

nlohmann::json to_json(const Ipv6Plan& plan) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& s : plan.subnets) rows.push_back({{"name", s.name}, {"ipv6", s.prefix.to_string()}});
  return {{"site", plan.site.to_string()}, {"subnets", rows}};
}

}  // namespace hometunnel::netplan
