#include "hometunnel/netplan/ip.hpp"

#include <arpa/inet.h>

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace hometunnel::netplan {

std::optional<Ipv4Address> Ipv4Address::try_parse(std::string_view text) {
  const std::string s(text);
  in_addr raw{};
  if (inet_pton(AF_INET, s.c_str(), &raw) != 1) return std::nullopt;
  return Ipv4Address(ntohl(raw.s_addr));
}

Ipv4Address Ipv4Address::parse(std::string_view text) {
  if (auto addr = try_parse(text)) return *addr;
  throw std::invalid_argument("invalid IPv4 address: " + std::string(text));
}

std::string Ipv4Address::to_string() const {
  in_addr raw{htonl(value_)};
  char buf[INET_ADDRSTRLEN];
  inet_ntop(AF_INET, &raw, buf, sizeof buf);
  return buf;
}

std::string Ipv4Address::to_hex() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02X.%02X.%02X.%02X", octet(0), octet(1), octet(2), octet(3));
  return buf;
}

Ipv4Network::Ipv4Network(Ipv4Address base, int prefix) : base_(base), prefix_(prefix) {
  if (prefix < 0 || prefix > 32) {
    throw std::invalid_argument("prefix length out of range: " + std::to_string(prefix));
  }
  if ((base.value() & ~mask()) != 0) {
    throw std::invalid_argument("host bits set in " + base.to_string() + "/" + std::to_string(prefix));
  }
}

Ipv4Network Ipv4Network::parse(std::string_view text) {
  const auto slash = text.find('/');
  const auto addr = Ipv4Address::parse(text.substr(0, slash));
  if (slash == std::string_view::npos) return {addr, 32};
  const auto digits = text.substr(slash + 1);
  int prefix = -1;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), prefix);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
    throw std::invalid_argument("invalid prefix in " + std::string(text));
  }
  return {addr, prefix};
}

std::string Ipv4Network::to_string() const {
  return base_.to_string() + "/" + std::to_string(prefix_);
}

}  // namespace hometunnel::netplan
