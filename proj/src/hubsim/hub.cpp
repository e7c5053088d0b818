#include "hometunnel/hubsim/hub.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hometunnel::hubsim {

namespace {

std::string random_token(std::mt19937_64& rng) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  while (out.size() < 40) {
    auto word = rng();
    for (int i = 0; i < 8 && out.size() < 40; ++i, word >>= 8) {
      out.push_back(kHex[(word >> 4) & 0xf]);
      out.push_back(kHex[word & 0xf]);
    }
  }
  return out;
}

std::string format_ms(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

std::string_view to_string(Transport t) {
  switch (t) {
    case Transport::lan_http: return "lan-http";
    case Transport::wg_http: return "wg-http";
    case Transport::wg_https: return "wg-https";
    case Transport::cloud_https: return "cloud-https";
  }
  return "?";
}

Transport parse_transport(std::string_view text) {
  for (const auto t : {Transport::lan_http, Transport::wg_http, Transport::wg_https, Transport::cloud_https}) {
    if (to_string(t) == text) return t;
  }
  throw std::invalid_argument("unknown transport: " + std::string(text));
}

bool uses_tls(Transport t) { return t == Transport::wg_https || t == Transport::cloud_https; }

std::string_view to_string(Transition t) { return t == Transition::off_to_on ? "off->on" : "on->off"; }

Transition parse_transition(std::string_view text) {
  if (text == "off->on") return Transition::off_to_on;
  if (text == "on->off") return Transition::on_to_off;
  throw std::invalid_argument("unknown transition: " + std::string(text));
}

Hub::Hub(HubConfig config, std::uint64_t seed) : config_(config), rng_(seed) {
  if (!(config_.processing_time.count() > 0)) throw std::invalid_argument("hub processing time must be positive");
}

void Hub::press_button(Millis now) { button_pressed_at_ = now; }

bool Hub::button_active(Millis now) const {
  return button_pressed_at_ && now >= *button_pressed_at_ && now - *button_pressed_at_ <= config_.button_window;
}

std::string Hub::create_api_key(Millis now) {
  if (!button_active(now)) throw HubError(HubError::Kind::authorization, "link button not pressed");
  std::string key;
  do {
    key = random_token(rng_);
  } while (keys_.contains(key));
  keys_.insert(key);
  return key;
}

SetLightResult Hub::set_light(const Command& command, Millis now, Millis extra_processing) {
  SetLightResult r;
  r.completed_at = now + extra_processing + config_.processing_time;
  if (offline_) {
    r.error = "hub-offline";
    return r;
  }
  if (!authorized(command.key)) {
    r.error = "unauthorized";
    return r;
  }
  r.success = true;
  if (command.on != light_on_) {
    light_on_ = command.on;
    LightEvent e{r.completed_at + config_.monitor_offset,
                 command.on ? Transition::off_to_on : Transition::on_to_off};
    events_.push_back(e);
    r.event = e;
  }
  return r;
}

nlohmann::json Hub::handle_request(const nlohmann::json& body, Millis now, Millis extra_processing) {
  if (!body.is_object() || !body.contains("key") || !body.contains("on") || !body["key"].is_string() ||
      !body["on"].is_boolean()) {
    return {{"error", "bad-request"}};
  }
  Command c;
  c.key = body["key"].get<std::string>();
  c.on = body["on"].get<bool>();
  const auto r = set_light(c, now, extra_processing);
  if (!r.success) return {{"error", r.error}};
  return {{"success", true}};
}

std::string events_csv(const std::vector<LightEvent>& events) {
  std::string out = "monitor_ms,transition\n";
  for (const auto& e : events) {
    out += format_ms(e.monitor_time.count());
    out += ',';
    out += to_string(e.transition);
    out += '\n';
  }
  return out;
}

std::vector<LightEvent> events_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<LightEvent> events;
  if (!std::getline(in, line) || line != "monitor_ms,transition") {
    throw std::invalid_argument("event CSV header mismatch");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("bad event row: " + line);
    double ms = 0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + comma, ms);
    if (ec != std::errc{} || ptr != line.data() + comma) throw std::invalid_argument("bad event time: " + line);
    events.push_back({Millis{ms}, parse_transition(std::string_view(line).substr(comma + 1))});
  }
  return events;
}

void export_events(const std::vector<LightEvent>& events, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << events_csv(events);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace hometunnel::hubsim
