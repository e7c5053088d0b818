#include "hometunnel/hubsim/cloud.hpp"

namespace hometunnel::hubsim {

CloudRelay::CloudRelay(CloudConfig config, std::uint64_t seed) : config_(config), rng_(seed) {
  if (config_.processing_time.count() < 0) throw std::invalid_argument("cloud processing must be non-negative");
}

void CloudRelay::channel_up(Millis now) {
  if (!channel_) channel_since_ = now;
  channel_ = true;
}

void CloudRelay::channel_down() { channel_ = false; }

std::string CloudRelay::issue_access_token(const std::string& hub_key) {
  std::string token;
  do {
    token = "tok-" + std::to_string(rng_());
  } while (tokens_.contains(token));
  tokens_[token] = hub_key;
  return token;
}

RelayResult CloudRelay::relay_command(const std::string& token, Millis now, Millis extra_processing) {
  RelayResult r;
  r.ack_at = now + extra_processing + config_.processing_time;
  r.forward_at = r.ack_at;
  const auto it = tokens_.find(token);
  if (it == tokens_.end()) {
    r.error = "unauthorized";
    return r;
  }
  if (!channel_) {
    r.error = "channel-down";
    return r;
  }
  r.success = true;
  r.hub_key = it->second;
  return r;
}

}  // namespace hometunnel::hubsim
