#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "hometunnel/hubsim/cloud.hpp"
#include "hometunnel/hubsim/https.hpp"
#include "hometunnel/hubsim/hub.hpp"

using namespace hometunnel::hubsim;

namespace {

Command cmd(const std::string& key, bool on, Millis at = Millis{0}) {
  return Command{key, on, at, Transport::lan_http, 1};
}

}  // namespace

TEST_CASE("api keys require a fresh button press") {
  Hub hub({}, 1);
  CHECK_THROWS_AS((void)hub.create_api_key(Millis{0}), HubError);
  hub.press_button(Millis{100});
  const auto a = hub.create_api_key(Millis{200});
  hub.press_button(Millis{300});
  const auto b = hub.create_api_key(Millis{400});
  CHECK(a != b);
  CHECK(a.size() == 40);
  CHECK(hub.authorized(a));
  CHECK(hub.authorized(b));
  CHECK_FALSE(hub.authorized("nope"));
  try {
    (void)hub.create_api_key(Millis{300} + hub.config().button_window + Millis{1});
    FAIL("key issued after the window");
  } catch (const HubError& e) {
    CHECK(e.kind() == HubError::Kind::authorization);
  }
}

TEST_CASE("set_light is synchronous and logs one event per change") {
  HubConfig cfg;
  cfg.monitor_offset = Millis{-3};
  Hub hub(cfg, 2);
  hub.press_button(Millis{0});
  const auto key = hub.create_api_key(Millis{0});

  auto r = hub.set_light(cmd(key, true), Millis{1000});
  CHECK(r.success);
  CHECK(r.completed_at == Millis{1028});
  REQUIRE(r.event);
  CHECK(r.event->monitor_time == Millis{1025});
  CHECK(r.event->transition == Transition::off_to_on);
  CHECK(hub.light_on());

  auto same = hub.set_light(cmd(key, true), Millis{2000});
  CHECK(same.success);
  CHECK_FALSE(same.event);
  CHECK(hub.events().size() == 1);

  auto bad = hub.set_light(cmd("forged", false), Millis{3000});
  CHECK_FALSE(bad.success);
  CHECK(bad.error == "unauthorized");
  CHECK(hub.light_on());
  CHECK(hub.events().size() == 1);

  auto slow = hub.set_light(cmd(key, false), Millis{4000}, Millis{5});
  CHECK(slow.completed_at == Millis{4033});

  hub.set_offline(true);
  auto off = hub.set_light(cmd(key, true), Millis{5000});
  CHECK_FALSE(off.success);
  CHECK(off.error == "hub-offline");
  CHECK(hub.events().size() == 2);
}

TEST_CASE("events alternate for any command sequence") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Hub hub({}, trial);
    hub.press_button(Millis{0});
    const auto key = hub.create_api_key(Millis{0});
    std::size_t successes_with_change = 0;
    bool state = false;
    for (int i = 0; i < 200; ++i) {
      const bool on = rng() % 2;
      const bool valid = rng() % 5 != 0;
      const auto r = hub.set_light(cmd(valid ? key : "x", on), Millis{i * 100.0});
      CHECK(r.success == valid);
      CHECK(r.event.has_value() == (valid && on != state));
      if (valid && on != state) {
        ++successes_with_change;
        state = on;
      }
    }
    CHECK(hub.events().size() == successes_with_change);
    for (std::size_t i = 1; i < hub.events().size(); ++i) {
      CHECK(hub.events()[i].transition != hub.events()[i - 1].transition);
      CHECK(hub.events()[i].monitor_time > hub.events()[i - 1].monitor_time);
    }
    if (!hub.events().empty()) CHECK(hub.events()[0].transition == Transition::off_to_on);
  }
}

TEST_CASE("json request surface") {
  Hub hub({}, 3);
  hub.press_button(Millis{0});
  const auto key = hub.create_api_key(Millis{0});
  CHECK(hub.handle_request({{"key", key}, {"on", true}}, Millis{10}) == nlohmann::json{{"success", true}});
  CHECK(hub.handle_request({{"key", "zz"}, {"on", true}}, Millis{10}) == nlohmann::json{{"error", "unauthorized"}});
  CHECK(hub.handle_request({{"on", true}}, Millis{10}).contains("error"));
  CHECK(hub.handle_request({{"key", key}, {"on", "yes"}}, Millis{10}).contains("error"));
}

TEST_CASE("cloud relay forwards only over the hub channel") {
  CloudRelay cloud({}, 4);
  const auto token = cloud.issue_access_token("hubkey");
  CHECK(token != cloud.issue_access_token("hubkey"));

  auto down = cloud.relay_command(token, Millis{0});
  CHECK_FALSE(down.success);
  CHECK(down.error == "channel-down");

  cloud.channel_up(Millis{5});
  CHECK(cloud.channel_established());
  CHECK(cloud.channel_since() == Millis{5});
  auto ok = cloud.relay_command(token, Millis{100}, Millis{7});
  CHECK(ok.success);
  CHECK(ok.hub_key == "hubkey");
  CHECK(ok.ack_at == Millis{157});
  CHECK(ok.forward_at >= Millis{100});

  CHECK(cloud.relay_command("bogus", Millis{100}).error == "unauthorized");

  cloud.channel_down();
  for (int i = 0; i < 10; ++i) CHECK_FALSE(cloud.relay_command(token, Millis{200.0 + i}).success);
}

TEST_CASE("https overhead schedule") {
  HttpsConfig cfg;
  cfg.crypto_cost = Millis{12};
  CHECK(https_overhead(Transport::wg_http, cfg, true) == HttpsSchedule{});
  CHECK(https_overhead(Transport::lan_http, cfg, true) == HttpsSchedule{});
  CHECK(https_overhead(Transport::wg_https, cfg, true) == HttpsSchedule{2, Millis{12}});
  CHECK(https_overhead(Transport::wg_https, cfg, false) == HttpsSchedule{0, Millis{12}});
  CHECK(https_overhead(Transport::cloud_https, cfg, false) == HttpsSchedule{0, Millis{12}});
  cfg.session_cache = false;
  CHECK(https_overhead(Transport::wg_https, cfg, false) == HttpsSchedule{2, Millis{12}});

  TlsSession s(Transport::wg_https, HttpsConfig{true, Millis{3}, 2});
  CHECK_FALSE(s.established());
  CHECK(s.next_request().extra_round_trips == 2);
  CHECK(s.established());
  CHECK(s.next_request().extra_round_trips == 0);
  s.reset();
  CHECK(s.next_request().extra_round_trips == 2);
}

TEST_CASE("transport names") {
  for (auto t : {Transport::lan_http, Transport::wg_http, Transport::wg_https, Transport::cloud_https}) {
    CHECK(parse_transport(to_string(t)) == t);
  }
  CHECK(uses_tls(Transport::wg_https));
  CHECK(uses_tls(Transport::cloud_https));
  CHECK_FALSE(uses_tls(Transport::wg_http));
  CHECK(to_string(Transition::off_to_on) == "off->on");
  CHECK(parse_transition("on->off") == Transition::on_to_off);
  CHECK_THROWS_AS((void)parse_transport("carrier-pigeon"), std::invalid_argument);
}

TEST_CASE("event csv") {
  const std::vector<LightEvent> ev{{Millis{1025.5}, Transition::off_to_on}, {Millis{2030}, Transition::on_to_off}};
  const auto text = events_csv(ev);
  CHECK(text == "monitor_ms,transition\n1025.5,off->on\n2030,on->off\n");
  CHECK(events_from_csv(text) == ev);
  CHECK_THROWS_AS((void)events_from_csv("time,what\n"), std::invalid_argument);
  CHECK_THROWS_AS((void)events_from_csv("monitor_ms,transition\nabc,off->on\n"), std::invalid_argument);

  const auto path = std::filesystem::temp_directory_path() / "hubsim_events_test.csv";
  export_events(ev, path.string());
  std::ifstream in(path);
  std::string all((std::istreambuf_iterator<char>(in)), {});
  CHECK(all == text);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(export_events(ev, "/nonexistent/dir/x.csv"), std::runtime_error);
}
