#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hometunnel/simnet/time.hpp"

namespace hometunnel::hubsim {

using simnet::Millis;

enum class Transport { lan_http, wg_http, wg_https, cloud_https };
[[nodiscard]] std::string_view to_string(Transport t);
[[nodiscard]] Transport parse_transport(std::string_view text);
[[nodiscard]] bool uses_tls(Transport t);

enum class Transition { off_to_on, on_to_off };
[[nodiscard]] std::string_view to_string(Transition t);
[[nodiscard]] Transition parse_transition(std::string_view text);

struct LightEvent {
  Millis monitor_time{0};  // monitor clock
  Transition transition = Transition::off_to_on;

  friend bool operator==(const LightEvent&, const LightEvent&) = default;
};

struct Command {
  std::string key;
  bool on = true;
  Millis issued_at{0};  // client clock
  Transport transport = Transport::lan_http;
  std::uint64_t sequence = 0;
};

class HubError : public std::runtime_error {
public:
  enum class Kind { authorization, offline };
  HubError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] Kind kind() const { return kind_; }

private:
  Kind kind_;
};

struct HubConfig {
  Millis processing_time{28};
  Millis button_window{30'000};
  Millis monitor_offset{0};
  bool tls_enabled = false;
};

struct SetLightResult {
  bool success = false;
  std::string error;  // "unauthorized" or "hub-offline" on failure
  Millis completed_at{0};
  std::optional<LightEvent> event;
};

/// Bridge with one light. Authorization follows the link-button pairing flow:
/// a key is only issued while the button press is fresh.
class Hub {
public:
  Hub(HubConfig config, std::uint64_t seed);

  void press_button(Millis now);
  [[nodiscard]] bool button_active(Millis now) const;
  /// Throws HubError(authorization) unless the button was pressed within the window.
  std::string create_api_key(Millis now);
  [[nodiscard]] bool authorized(std::string_view key) const { return keys_.contains(std::string(key)); }

  /// Synchronous: completes after the processing time. Extra processing (e.g.
  /// TLS record work) is added before actuation.
  SetLightResult set_light(const Command& command, Millis now, Millis extra_processing = Millis{0});
  /// JSON surface: {"key": "...", "on": true} -> {"success": true} | {"error": "..."}.
  nlohmann::json handle_request(const nlohmann::json& body, Millis now, Millis extra_processing = Millis{0});

  void set_offline(bool offline) { offline_ = offline; }
  [[nodiscard]] bool offline() const { return offline_; }
  [[nodiscard]] bool light_on() const { return light_on_; }
  [[nodiscard]] const HubConfig& config() const { return config_; }
  [[nodiscard]] const std::vector<LightEvent>& events() const { return events_; }

private:
  HubConfig config_;
  std::mt19937_64 rng_;
  std::set<std::string> keys_;
  std::optional<Millis> button_pressed_at_;
  bool light_on_ = false;
  bool offline_ = false;
  std::vector<LightEvent> events_;
};

/// "monitor_ms,transition" then one row per event.
[[nodiscard]] std::string events_csv(const std::vector<LightEvent>& events);
[[nodiscard]] std::vector<LightEvent> events_from_csv(std::string_view text);
/// Throws std::runtime_error on I/O failure.
void export_events(const std::vector<LightEvent>& events, const std::string& path);

}  // namespace hometunnel::hubsim
