#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>

#include "hometunnel/hubsim/hub.hpp"

namespace hometunnel::hubsim {

struct CloudConfig {
  Millis processing_time{50};
};

struct RelayResult {
  bool success = false;
  std::string error;      // "unauthorized" or "channel-down"
  Millis ack_at{0};       // reply leaves the cloud
  Millis forward_at{0};   // command enters the hub channel
  std::string hub_key;    // key presented to the hub on the channel
};

/// Vendor relay. Commands reach the hub only over the channel the hub opened.
class CloudRelay {
public:
  CloudRelay(CloudConfig config, std::uint64_t seed);

  void channel_up(Millis now);
  void channel_down();
  [[nodiscard]] bool channel_established() const { return channel_; }
  [[nodiscard]] Millis channel_since() const { return channel_since_; }

  /// Binds a fresh opaque token to a hub key obtained during pairing.
  std::string issue_access_token(const std::string& hub_key);

  /// Acknowledges after processing (plus any TLS record work); the hub sees
  /// the command via the channel.
  RelayResult relay_command(const std::string& token, Millis now, Millis extra_processing = Millis{0});

  [[nodiscard]] const CloudConfig& config() const { return config_; }

private:
  CloudConfig config_;
  std::mt19937_64 rng_;
  std::map<std::string, std::string> tokens_;
  bool channel_ = false;
  Millis channel_since_{0};
};

}  // namespace hometunnel::hubsim
