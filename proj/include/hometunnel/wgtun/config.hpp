#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hometunnel/wgtun/device.hpp"

namespace hometunnel::wgtun {

/// Interface section plus peers, as read from a tunnel configuration file:
///
///   {"interface": {"private_key": "<base64>", "listen_port": 51820},
///    "peers": [{"public_key": "<base64>", "allowed_ips": ["192.168.32.0/20"],
///               "endpoint": "203.0.113.7:51820"}]}
struct DeviceConfig {
  PeerIdentity identity;
  std::uint16_t listen_port = 51820;
  std::vector<PeerConfig> peers;
};

[[nodiscard]] nlohmann::json to_json(const DeviceConfig& config);
/// Derives the public key from the private key. Throws std::invalid_argument on bad input.
[[nodiscard]] DeviceConfig device_config_from_json(const nlohmann::json& doc,
                                                   const CryptoSuite& suite = *default_suite());

[[nodiscard]] nlohmann::json to_json(const PeerConfig& peer);
[[nodiscard]] PeerConfig peer_config_from_json(const nlohmann::json& doc);

/// Builds a device and registers every configured peer.
[[nodiscard]] TunnelDevice make_device(const DeviceConfig& config, std::uint64_t seed,
                                       std::shared_ptr<const CryptoSuite> suite = default_suite(),
                                       RekeyPolicy policy = {});

}  // namespace hometunnel::wgtun
