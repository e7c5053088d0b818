#include "hometunnel/latbench/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>

#include "hometunnel/latbench/calibration.hpp"

namespace hometunnel::latbench {

using nlohmann::json;

std::string_view to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::lan_local: return "lan-local";
    case ScenarioId::cloud_guestwifi: return "cloud-guestwifi";
    case ScenarioId::wg_http_4g: return "wg-http-4g";
    case ScenarioId::wg_https_4g: return "wg-https-4g";
    case ScenarioId::cloud_4g: return "cloud-4g";
    case ScenarioId::wg_http_office: return "wg-http-office";
    case ScenarioId::wg_https_office: return "wg-https-office";
    case ScenarioId::cloud_office: return "cloud-office";
    case ScenarioId::wg_http_public: return "wg-http-public";
    case ScenarioId::wg_https_public: return "wg-https-public";
    case ScenarioId::cloud_public: return "cloud-public";
  }
  return "?";
}

ScenarioId parse_scenario(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  std::replace(lower.begin(), lower.end(), '_', '-');
  for (const auto id : kAllScenarios) {
    if (to_string(id) == lower) return id;
  }
  throw std::invalid_argument("unknown scenario: " + std::string(text));
}

hubsim::Transport transport_of(ScenarioId id) {
  switch (id) {
    case ScenarioId::lan_local: return hubsim::Transport::lan_http;
    case ScenarioId::wg_http_4g:
    case ScenarioId::wg_http_office:
    case ScenarioId::wg_http_public: return hubsim::Transport::wg_http;
    case ScenarioId::wg_https_4g:
    case ScenarioId::wg_https_office:
    case ScenarioId::wg_https_public: return hubsim::Transport::wg_https;
    default: return hubsim::Transport::cloud_https;
  }
}

std::string_view network_of(ScenarioId id) {
  switch (id) {
    case ScenarioId::lan_local: return "home";
    case ScenarioId::cloud_guestwifi: return "guest-wifi";
    case ScenarioId::wg_http_4g:
    case ScenarioId::wg_https_4g:
    case ScenarioId::cloud_4g: return "4g";
    case ScenarioId::wg_http_office:
    case ScenarioId::wg_https_office:
    case ScenarioId::cloud_office: return "office";
    default: return "public-wifi";
  }
}

DelayTarget published_target(ScenarioId id) {
  auto t = [](double min, double mean, double sd) { return DelayTarget{Millis{min}, Millis{mean}, Millis{sd}}; };
  switch (id) {
    case ScenarioId::lan_local: return t(28.33, 72.92, 17.22);
    case ScenarioId::cloud_guestwifi: return t(447.13, 557.05, 79.90);
    case ScenarioId::wg_http_4g: return t(309.79, 369.17, 107.63);
    case ScenarioId::wg_https_4g: return t(788.98, 948.51, 80.38);
    case ScenarioId::cloud_4g: return t(723.11, 938.51, 795.82);
    case ScenarioId::wg_http_office: return t(117.34, 158.84, 81.69);
    case ScenarioId::wg_https_office: return t(413.68, 472.27, 63.5);
    case ScenarioId::cloud_office: return t(362.03, 465.81, 322.11);
    case ScenarioId::wg_http_public: return t(113.85, 145.18, 118.23);
    case ScenarioId::wg_https_public: return t(410.47, 475.68, 200.69);
    case ScenarioId::cloud_public: return t(389.07, 477.24, 94.46);
  }
  throw std::invalid_argument("unknown scenario");
}

void ScenarioConfig::validate() const {
  if (command_count <= 0) throw std::invalid_argument("command count must be positive");
  access_link.validate();
  home_uplink.validate();
  home_lan.validate();
  if (cloud_link) cloud_link->validate();
  if (transport_of(id) == hubsim::Transport::cloud_https && !cloud_link) {
    throw std::invalid_argument(std::string(to_string(id)) + " needs a cloud link");
  }
  if (!(hub_processing.count() > 0)) throw std::invalid_argument("hub processing must be positive");
  if (cloud.processing_time.count() < 0 || https.crypto_cost.count() < 0 || https.handshake_round_trips < 0) {
    throw std::invalid_argument("costs must be non-negative");
  }
  if (!(timeout.count() > 0)) throw std::invalid_argument("timeout must be positive");
  if (ntp_bound.count() < 0 || start_at.count() < 0) throw std::invalid_argument("negative time setting");
  if (rekey_max_messages == 0 || !(rekey_max_age.count() > 0)) throw std::invalid_argument("bad rekey policy");
}

json to_json(const ScenarioConfig& c) {
  json j;
  j["scenario"] = to_string(c.id);
  j["access_link"] = simnet::to_json(c.access_link);
  j["cloud_link"] = c.cloud_link ? simnet::to_json(*c.cloud_link) : json(nullptr);
  j["home_uplink"] = simnet::to_json(c.home_uplink);
  j["home_lan"] = simnet::to_json(c.home_lan);
  j["command_count"] = c.command_count;
  j["https"] = {{"session_cache", c.https.session_cache},
                {"crypto_cost", c.https.crypto_cost.count()},
                {"handshake_round_trips", c.https.handshake_round_trips}};
  j["hub_processing"] = c.hub_processing.count();
  j["cloud_processing"] = c.cloud.processing_time.count();
  j["seed"] = c.seed;
  j["timeout"] = c.timeout.count();
  j["ntp_bound"] = c.ntp_bound.count();
  j["start_at"] = c.start_at.count();
  j["hub_channel"] = c.hub_channel;
  j["rekey"] = {{"max_messages", c.rekey_max_messages}, {"max_age", c.rekey_max_age.count()}};
  return j;
}

ScenarioConfig scenario_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("scenario")) throw std::invalid_argument("config needs a scenario id");
  try {
    ScenarioConfig c = default_calibration(parse_scenario(doc.at("scenario").get<std::string>()));
    auto link = [&](const char* key, LinkModel& target) {
      if (doc.contains(key)) {
        target = simnet::link_from_json(doc[key]);
        if (!doc[key].contains("name")) target.name = key;
      }
    };
    link("access_link", c.access_link);
    link("home_uplink", c.home_uplink);
    link("home_lan", c.home_lan);
    if (doc.contains("cloud_link")) {
      if (doc["cloud_link"].is_null()) {
        c.cloud_link.reset();
      } else {
        LinkModel l = simnet::link_from_json(doc["cloud_link"]);
        if (!doc["cloud_link"].contains("name")) l.name = "cloud_link";
        c.cloud_link = l;
      }
    }
    c.command_count = doc.value("command_count", c.command_count);
    if (doc.contains("https")) {
      const auto& h = doc["https"];
      c.https.session_cache = h.value("session_cache", c.https.session_cache);
      c.https.crypto_cost = Millis{h.value("crypto_cost", c.https.crypto_cost.count())};
      c.https.handshake_round_trips = h.value("handshake_round_trips", c.https.handshake_round_trips);
    }
    c.hub_processing = Millis{doc.value("hub_processing", c.hub_processing.count())};
    c.cloud.processing_time = Millis{doc.value("cloud_processing", c.cloud.processing_time.count())};
    c.seed = doc.value("seed", c.seed);
    c.timeout = Millis{doc.value("timeout", c.timeout.count())};
    c.ntp_bound = Millis{doc.value("ntp_bound", c.ntp_bound.count())};
    c.start_at = Millis{doc.value("start_at", c.start_at.count())};
    c.hub_channel = doc.value("hub_channel", c.hub_channel);
    if (doc.contains("rekey")) {
      c.rekey_max_messages = doc["rekey"].value("max_messages", c.rekey_max_messages);
      c.rekey_max_age = Millis{doc["rekey"].value("max_age", c.rekey_max_age.count())};
    }
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("scenario config: ") + e.what());
  }
}

}  // namespace hometunnel::latbench
