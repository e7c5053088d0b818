#include "hometunnel/latbench/calibration.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace hometunnel::latbench {

namespace {

LinkModel segment(const double (&rtt)[3], const char* name) {
  return simnet::fit_link_model(Millis{rtt[0]}, Millis{rtt[1]}, Millis{rtt[2]}, name);
}

// How a scenario's reply delay is put together, access link aside.
struct Composition {
  std::vector<LinkModel> others;      // segments on every request path
  std::vector<LinkModel> wg_extra;    // segments besides access crossed by the tunnel handshake
  Millis fixed{0};                    // processing and per-request crypto
  double handshake_share = 0;         // tunnel handshakes per request
  double tls_share = 0;               // extra TLS round trips per request
};

Composition compose(const ScenarioConfig& c) {
  Composition k;
  const auto transport = transport_of(c.id);
  const double n = c.command_count;
  switch (transport) {
    case hubsim::Transport::lan_http:
      k.others = {c.home_lan};
      k.fixed = c.hub_processing;
      break;
    case hubsim::Transport::wg_http:
    case hubsim::Transport::wg_https:
      k.others = {c.home_uplink, c.home_lan};
      k.wg_extra = {c.home_uplink};
      k.fixed = c.hub_processing;
      k.handshake_share = 1.0 / n;
      break;
    case hubsim::Transport::cloud_https:
      if (!c.cloud_link) throw std::invalid_argument("cloud scenario without cloud link");
      k.others = {*c.cloud_link};
      k.fixed = c.cloud.processing_time;
      break;
  }
  if (hubsim::uses_tls(transport)) {
    k.fixed += c.https.crypto_cost;
    const double trips = c.https.handshake_round_trips;
    k.tls_share = c.https.session_cache ? trips / n : trips;
  }
  return k;
}

Millis sum_means(const std::vector<LinkModel>& links) {
  Millis s{0};
  for (const auto& l : links) s += l.mean();
  return s;
}

}  // namespace

Millis wg_tls_crypto_cost(ScenarioId id) {
  switch (id) {
    case ScenarioId::wg_http_4g:
    case ScenarioId::wg_https_4g:
    case ScenarioId::cloud_4g:
      return published_target(ScenarioId::wg_https_4g).min - published_target(ScenarioId::wg_http_4g).min;
    case ScenarioId::wg_http_office:
    case ScenarioId::wg_https_office:
    case ScenarioId::cloud_office:
      return published_target(ScenarioId::wg_https_office).min - published_target(ScenarioId::wg_http_office).min;
    case ScenarioId::wg_http_public:
    case ScenarioId::wg_https_public:
    case ScenarioId::cloud_public:
      return published_target(ScenarioId::wg_https_public).min - published_target(ScenarioId::wg_http_public).min;
    default:
      return Millis{0};
  }
}

Millis configured_floor(const ScenarioConfig& config) {
  const auto k = compose(config);
  Millis floor = k.fixed + config.access_link.min_delay;
  for (const auto& l : k.others) floor += l.min_delay;
  return floor;
}

Millis expected_mean(const ScenarioConfig& config) {
  const auto k = compose(config);
  const Millis access = config.access_link.mean();
  const Millis path = access + sum_means(k.others);
  return k.fixed + path + k.handshake_share * (access + sum_means(k.wg_extra)) + k.tls_share * path;
}

ScenarioConfig default_calibration(ScenarioId id) {
  ScenarioConfig c;
  c.id = id;
  c.home_lan = segment(kHomeLanRtt, "home-lan");
  c.home_uplink = segment(kHomeUplinkRtt, "home-uplink");
  c.hub_processing = Millis{kHubProcessingMs};
  c.cloud.processing_time = Millis{kCloudProcessingMs};
  const auto transport = transport_of(id);
  if (transport == hubsim::Transport::cloud_https) {
    c.cloud_link = segment(kCloudLinkRtt, "cloud-link");
    c.https.crypto_cost = Millis{kCloudCryptoMs};
  } else if (transport == hubsim::Transport::wg_https) {
    c.https.crypto_cost = wg_tls_crypto_cost(id);
  }

  const auto k = compose(c);
  const auto target = published_target(id);

  Millis other_min{0};
  double other_var = 0;
  for (const auto& l : k.others) {
    other_min += l.min_delay;
    other_var += std::pow(l.standard_deviation().count(), 2);
  }
  const Millis access_min = target.min - k.fixed - other_min;
  const Millis access_mean = (target.mean - k.fixed - sum_means(k.others) * (1 + k.tls_share) -
                              k.handshake_share * sum_means(k.wg_extra)) /
                             (1 + k.handshake_share + k.tls_share);
  const double access_var = target.sd.count() * target.sd.count() - other_var;
  if (access_min.count() < 0 || !(access_mean > access_min) || access_var <= 0) {
    throw std::logic_error(std::string(to_string(id)) + ": target not reachable with the fixed segments");
  }
  c.access_link = simnet::fit_link_model(access_min, access_mean, Millis{std::sqrt(access_var)}, "access");
  c.validate();
  return c;
}

}  // namespace hometunnel::latbench
