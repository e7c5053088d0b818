#include "hometunnel/wgtun/config.hpp"

#include <stdexcept>

namespace hometunnel::wgtun {

using nlohmann::json;

json to_json(const PeerConfig& peer) {
  json j;
  j["public_key"] = to_base64(peer.public_key);
  j["allowed_ips"] = json::array();
  for (const auto& net : peer.allowed_ips) j["allowed_ips"].push_back(net.to_string());
  if (peer.endpoint) j["endpoint"] = peer.endpoint->to_string();
  return j;
}

PeerConfig peer_config_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("public_key")) throw std::invalid_argument("peer needs public_key");
  PeerConfig peer;
  try {
    peer.public_key = key_from_base64(doc.at("public_key").get<std::string>());
    for (const auto& entry : doc.value("allowed_ips", json::array())) {
      peer.allowed_ips.push_back(netplan::Ipv4Network::parse(entry.get<std::string>()));
    }
    if (doc.contains("endpoint") && !doc["endpoint"].is_null()) {
      peer.endpoint = Endpoint::parse(doc["endpoint"].get<std::string>());
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("peer config: ") + e.what());
  }
  return peer;
}

json to_json(const DeviceConfig& config) {
  json j;
  j["interface"] = {{"private_key", to_base64(config.identity.private_key)},
                    {"listen_port", config.listen_port}};
  j["peers"] = json::array();
  for (const auto& p : config.peers) j["peers"].push_back(to_json(p));
  return j;
}

DeviceConfig device_config_from_json(const json& doc, const CryptoSuite& suite) {
  if (!doc.is_object() || !doc.contains("interface")) throw std::invalid_argument("config needs interface");
  DeviceConfig config;
  try {
    const auto& iface = doc.at("interface");
    config.identity.private_key = suite.clamp(key_from_base64(iface.at("private_key").get<std::string>()));
    config.identity.public_key = suite.public_key(config.identity.private_key);
    const int port = iface.value("listen_port", 51820);
    if (port <= 0 || port > 65535) throw std::invalid_argument("listen_port out of range");
    config.listen_port = static_cast<std::uint16_t>(port);
    for (const auto& p : doc.value("peers", json::array())) config.peers.push_back(peer_config_from_json(p));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("device config: ") + e.what());
  }
  return config;
}

TunnelDevice make_device(const DeviceConfig& config, std::uint64_t seed, std::shared_ptr<const CryptoSuite> suite,
                         RekeyPolicy policy) {
  TunnelDevice device(config.identity, config.listen_port, seed, std::move(suite), policy);
  for (const auto& p : config.peers) device.add_peer(p);
  return device;
}

}  // namespace hometunnel::wgtun
