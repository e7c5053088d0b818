#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include <json.hpp>

#include "hometunnel/hubsim/cloud.hpp"
#include "hometunnel/hubsim/https.hpp"
#include "hometunnel/simnet/link.hpp"

namespace hometunnel::latbench {

using simnet::LinkModel;
using simnet::Millis;

enum class ScenarioId {
  lan_local,
  cloud_guestwifi,
  wg_http_4g,
  wg_https_4g,
  cloud_4g,
  wg_http_office,
  wg_https_office,
  cloud_office,
  wg_http_public,
  wg_https_public,
  cloud_public,
};

inline constexpr std::array<ScenarioId, 11> kAllScenarios = {
    ScenarioId::lan_local,       ScenarioId::cloud_guestwifi, ScenarioId::wg_http_4g,     ScenarioId::wg_https_4g,
    ScenarioId::cloud_4g,        ScenarioId::wg_http_office,  ScenarioId::wg_https_office, ScenarioId::cloud_office,
    ScenarioId::wg_http_public,  ScenarioId::wg_https_public, ScenarioId::cloud_public,
};

/// Lower-case ids, e.g. "wg-http-office".
[[nodiscard]] std::string_view to_string(ScenarioId id);
/// Accepts either case. Throws std::invalid_argument.
[[nodiscard]] ScenarioId parse_scenario(std::string_view text);
[[nodiscard]] hubsim::Transport transport_of(ScenarioId id);
/// "home", "guest-wifi", "4g", "office" or "public-wifi".
[[nodiscard]] std::string_view network_of(ScenarioId id);

/// End-to-end round-trip target (minimum, mean, standard deviation).
struct DelayTarget {
  Millis min{0};
  Millis mean{0};
  Millis sd{0};
};
[[nodiscard]] DelayTarget published_target(ScenarioId id);

/// Every link model here is a round-trip law; the simulator runs each leg at half of it.
struct ScenarioConfig {
  ScenarioId id = ScenarioId::lan_local;
  LinkModel access_link;
  std::optional<LinkModel> cloud_link;
  LinkModel home_uplink;
  LinkModel home_lan;
  int command_count = 1000;
  hubsim::HttpsConfig https;
  Millis hub_processing{28};
  hubsim::CloudConfig cloud;
  std::uint64_t seed = 42;
  Millis timeout{10'000};
  Millis ntp_bound{10};
  Millis start_at{1'000};
  bool hub_channel = true;
  std::uint64_t rekey_max_messages = std::uint64_t{1} << 16;
  Millis rekey_max_age{120'000};

  /// Throws std::invalid_argument on a bad count, invalid links, or a cloud
  /// scenario without a cloud link.
  void validate() const;
};

[[nodiscard]] nlohmann::json to_json(const ScenarioConfig& config);
/// Fields absent from `doc` keep the values of default_calibration(doc["scenario"]).
[[nodiscard]] ScenarioConfig scenario_from_json(const nlohmann::json& doc);

}  // namespace hometunnel::latbench
