#include "hometunnel/latbench/runner.hpp"

#include <deque>
#include <functional>
#include <map>
#include <stdexcept>

#include "hometunnel/hubsim/cloud.hpp"
#include "hometunnel/hubsim/https.hpp"
#include "hometunnel/netplan/plan.hpp"
#include "hometunnel/netplan/policy.hpp"
#include "hometunnel/simnet/queue.hpp"
#include "hometunnel/wgtun/device.hpp"

namespace hometunnel::latbench {

namespace {

using hubsim::Transport;
using netplan::Ipv4Address;
using nlohmann::json;
using simnet::Event;
using simnet::Node;
using simnet::Payload;

const Ipv4Address kHubAddress(192, 168, 33, 10);
const Ipv4Address kClientTunnelAddress(10, 13, 13, 2);
const wgtun::Endpoint kRouterPublic{Ipv4Address(203, 0, 113, 1), 51820};
const wgtun::Endpoint kClientPublic{Ipv4Address(198, 51, 100, 20), 51820};

constexpr std::uint64_t kHandshakeFlows = std::uint64_t{1} << 62;
constexpr std::uint64_t kRequestStep = 15;
constexpr Millis kDrainLimit{60'000};

Payload to_payload(const json& j) {
  const auto s = j.dump();
  return Payload(s.begin(), s.end());
}

json from_payload(const wgtun::ByteView bytes) {
  return json::parse(bytes.begin(), bytes.end(), nullptr, false);
}

std::uint64_t app_flow(std::uint64_t seq, std::uint64_t step) { return seq * 16 + step; }

class Run {
public:
  explicit Run(const ScenarioConfig& config);
  RunResult execute();

private:
  simnet::Topology build_topology() const;

  void schedule(Millis at, Node node, std::function<void()> fn);
  void send(Node from, Node to, Payload payload, std::uint64_t flow);
  void send_datagrams(Node from, Node to, const std::vector<wgtun::Datagram>& out, std::uint64_t flow);
  void tick(Node node);

  void issue_next();
  void client_send(const json& msg, std::uint64_t flow);
  void client_app(const json& msg);
  void finish(bool ok);

  void on_client(const Event& e);
  void on_router(const Event& e);
  void on_hub(const Event& e);
  void on_cloud(const Event& e);
  void hub_reply(const json& msg, std::uint64_t flow, Millis at);

  [[nodiscard]] bool tunnel() const {
    return transport_ == Transport::wg_http || transport_ == Transport::wg_https;
  }
  [[nodiscard]] netplan::Protocol app_protocol() const {
    return hubsim::uses_tls(transport_) ? netplan::Protocol::https : netplan::Protocol::http;
  }
  [[nodiscard]] Millis tls_cost() const {
    return hubsim::uses_tls(transport_) ? config_.https.crypto_cost : Millis{0};
  }
  bool allowed(const netplan::Flow& flow);

  ScenarioConfig config_;
  Transport transport_;
  netplan::SubnetPlan plan_;
  simnet::EventQueue queue_;
  hubsim::Hub hub_;
  hubsim::CloudRelay cloud_;
  hubsim::TlsSession tls_;
  std::optional<wgtun::TunnelDevice> client_;
  std::optional<wgtun::TunnelDevice> router_;
  std::string hub_key_;
  std::string cloud_token_;
  bool hub_channel_up_ = false;

  std::map<std::uint64_t, std::function<void()>> timers_;
  std::uint64_t next_timer_ = 1;
  std::uint64_t next_handshake_flow_ = kHandshakeFlows;
  std::deque<std::uint64_t> staged_flows_;

  // Command in flight.
  std::uint64_t seq_ = 0;
  bool pending_ = false;
  Millis issued_at_{0};
  int tls_steps_ = 0;
  std::optional<Millis> done_at_;

  RunResult result_;
};

Run::Run(const ScenarioConfig& config)
    : config_((config.validate(), config)),
      transport_(transport_of(config.id)),
      plan_(netplan::default_plan()),
      queue_(build_topology(), config.seed),
      hub_(hubsim::HubConfig{config.hub_processing, Millis{30'000}, Millis{0}, hubsim::uses_tls(transport_)},
           simnet::substream_seed(config.seed, "hub")),
      cloud_(config.cloud, simnet::substream_seed(config.seed, "cloud")),
      tls_(transport_, config.https) {
  result_.id = config.id;
  const double u = queue_.stream("monitor-offset").uniform();
  result_.monitor_offset = config.ntp_bound * (2 * u - 1);
  auto hub_config = hub_.config();
  hub_config.monitor_offset = result_.monitor_offset;
  hub_ = hubsim::Hub(hub_config, simnet::substream_seed(config.seed, "hub"));
  hub_.press_button(Millis{0});
  hub_key_ = hub_.create_api_key(Millis{0});
  cloud_token_ = cloud_.issue_access_token(hub_key_);

  if (tunnel()) {
    const auto& suite = *wgtun::default_suite();
    const auto client_id = wgtun::generate_identity(simnet::substream_seed(config.seed, "client-identity"), suite);
    const auto router_id = wgtun::generate_identity(simnet::substream_seed(config.seed, "router-identity"), suite);
    wgtun::RekeyPolicy policy;
    policy.max_messages = config.rekey_max_messages;
    policy.max_session_age = config.rekey_max_age;
    client_.emplace(client_id, kClientPublic.port, simnet::substream_seed(config.seed, "client-device"),
                    wgtun::default_suite(), policy);
    router_.emplace(router_id, kRouterPublic.port, simnet::substream_seed(config.seed, "router-device"),
                    wgtun::default_suite(), policy);
    const auto scope = netplan::tunnel_scope(plan_);
    if (scope.blocks.empty()) throw std::invalid_argument("plan has no tunnel scope");
    client_->add_peer({router_id.public_key, scope.blocks, kRouterPublic, {}});
    router_->add_peer({client_id.public_key, {netplan::Ipv4Network(kClientTunnelAddress, 32)}, std::nullopt, {}});
  }
}

simnet::Topology Run::build_topology() const {
  using simnet::one_way;
  simnet::Topology t{std::string(to_string(config_.id))};
  const auto lan = one_way(config_.home_lan);
  switch (transport_of(config_.id)) {
    case Transport::lan_http:
      t.connect(Node::client, Node::router, {one_way(config_.access_link)});
      t.connect(Node::router, Node::hub, {lan});
      break;
    case Transport::wg_http:
    case Transport::wg_https:
      t.connect(Node::client, Node::router, {one_way(config_.access_link), one_way(config_.home_uplink)});
      t.connect(Node::router, Node::hub, {lan});
      break;
    case Transport::cloud_https:
      t.connect(Node::client, Node::cloud, {one_way(config_.access_link), one_way(*config_.cloud_link)});
      t.connect(Node::cloud, Node::router, {one_way(*config_.cloud_link), one_way(config_.home_uplink)}, true);
      t.connect(Node::router, Node::hub, {lan}, true);
      break;
  }
  return t;
}

void Run::schedule(Millis at, Node node, std::function<void()> fn) {
  const auto id = next_timer_++;
  timers_.emplace(id, std::move(fn));
  queue_.schedule_timer(at, node, id);
}

void Run::send(Node from, Node to, Payload payload, std::uint64_t flow) {
  if (!queue_.send(from, to, std::move(payload), flow)) ++result_.counters.link_drops;
}

void Run::send_datagrams(Node from, Node to, const std::vector<wgtun::Datagram>& out, std::uint64_t flow) {
  for (const auto& d : out) send(from, to, d.bytes, flow);
}

bool Run::allowed(const netplan::Flow& flow) {
  if (netplan::evaluate_policy(plan_, flow).verdict == netplan::Verdict::allow) return true;
  ++result_.counters.policy_denied;
  return false;
}

void Run::tick(Node node) {
  auto& device = node == Node::client ? client_ : router_;
  if (!device) return;
  const Node peer = node == Node::client ? Node::router : Node::client;
  for (auto& action : device->tick(queue_.now())) {
    if (action.kind == wgtun::TickAction::Kind::handshake_abandoned && node == Node::client) staged_flows_.clear();
    if (action.datagram) send(node, peer, action.datagram->bytes, next_handshake_flow_++);
  }
}

void Run::issue_next() {
  if (seq_ >= static_cast<std::uint64_t>(config_.command_count)) {
    done_at_ = queue_.now();
    return;
  }
  ++seq_;
  pending_ = true;
  issued_at_ = queue_.now();
  const bool on = seq_ % 2 == 1;
  result_.commands.push_back({seq_, issued_at_, on, false});
  const auto seq = seq_;
  schedule(issued_at_ + config_.timeout, Node::client, [this, seq] {
    if (pending_ && seq_ == seq) {
      tls_.reset();
      finish(false);
    }
  });
  tick(Node::client);

  const auto sched = tls_.next_request();
  tls_steps_ = sched.extra_round_trips;
  if (tls_steps_ > 0) {
    client_send({{"t", "tls"}, {"seq", seq_}, {"step", 1}}, app_flow(seq_, 1));
  } else {
    client_send({{"t", "req"}, {"seq", seq_}, {"on", on}}, app_flow(seq_, kRequestStep));
  }
}

void Run::client_send(const json& base, std::uint64_t flow) {
  json msg = base;
  if (msg["t"] == "req") {
    if (transport_ == Transport::cloud_https) {
      msg["token"] = cloud_token_;
    } else {
      msg["key"] = hub_key_;
    }
  }
  switch (transport_) {
    case Transport::lan_http:
      send(Node::client, Node::router, to_payload(msg), flow);
      return;
    case Transport::cloud_https:
      send(Node::client, Node::cloud, to_payload(msg), flow);
      return;
    default:
      break;
  }
  const wgtun::IpPacket packet{kClientTunnelAddress, kHubAddress, 6, to_payload(msg)};
  auto r = client_->seal(packet, queue_.now());
  switch (r.status) {
    case wgtun::SealStatus::sent:
      send_datagrams(Node::client, Node::router, r.datagrams, flow);
      break;
    case wgtun::SealStatus::handshake_started:
      result_.handshake_waits.push_back(seq_);
      staged_flows_.push_back(flow);
      send_datagrams(Node::client, Node::router, r.datagrams, next_handshake_flow_++);
      break;
    case wgtun::SealStatus::handshake_pending:
      result_.handshake_waits.push_back(seq_);
      staged_flows_.push_back(flow);
      break;
    default:
      ++result_.counters.tunnel_refused;
      break;
  }
}

void Run::client_app(const json& msg) {
  if (!pending_ || !msg.is_object() || msg.value("seq", std::uint64_t{0}) != seq_) return;
  const auto type = msg.value("t", std::string{});
  if (type == "tls-ack") {
    const int step = msg.value("step", 0);
    if (step < tls_steps_) {
      client_send({{"t", "tls"}, {"seq", seq_}, {"step", step + 1}}, app_flow(seq_, step + 1));
    } else {
      client_send({{"t", "req"}, {"seq", seq_}, {"on", seq_ % 2 == 1}}, app_flow(seq_, kRequestStep));
    }
  } else if (type == "rep") {
    const auto body = msg.value("body", json::object());
    finish(body.value("success", false));
  }
}

void Run::finish(bool ok) {
  pending_ = false;
  const Millis now = queue_.now();
  DelaySample s;
  s.sequence = seq_;
  s.issued_at = issued_at_;
  s.replied_at = now;
  s.status = ok ? SampleStatus::ok : SampleStatus::failed;
  if (ok) s.delay = now - issued_at_;
  result_.samples.push_back(s);
  result_.commands.back().ok = ok;
  issue_next();
}

void Run::on_client(const Event& e) {
  if (!tunnel()) {
    client_app(from_payload(e.payload));
    return;
  }
  auto in = client_->receive(e.payload, kRouterPublic, queue_.now());
  for (const auto& d : in.replies) {
    std::uint64_t flow = e.flow;
    if (wgtun::peek_type(d.bytes) == wgtun::MessageType::transport) {
      flow = 0;
      if (!d.keepalive && !staged_flows_.empty()) {
        flow = staged_flows_.front();
        staged_flows_.pop_front();
      }
    }
    send(Node::client, Node::router, d.bytes, flow);
  }
  if (in.packet && in.packet->src == kHubAddress) client_app(from_payload(in.packet->payload));
  tick(Node::client);
}

void Run::on_router(const Event& e) {
  const Millis now = queue_.now();
  if (transport_ == Transport::lan_http) {
    // Same segment as the hub: the router only switches frames.
    send(Node::router, e.from == Node::client ? Node::hub : Node::client, e.payload, e.flow);
    return;
  }
  if (transport_ == Transport::cloud_https) {
    const auto msg = from_payload(e.payload);
    const auto type = msg.value("t", std::string{});
    if (e.from == Node::hub) {
      const auto state = type == "chan-open" ? netplan::ConnState::new_connection : netplan::ConnState::established;
      if (allowed({kHubAddress, netplan::Zone::internet, netplan::Protocol::https, std::nullopt, state})) {
        send(Node::router, Node::cloud, e.payload, e.flow);
      }
    } else if (allowed({netplan::Zone::internet, kHubAddress, netplan::Protocol::https, std::nullopt,
                        netplan::ConnState::established})) {
      send(Node::router, Node::hub, e.payload, e.flow);
    }
    return;
  }

  if (e.from == Node::client) {
    auto in = router_->receive(e.payload, kClientPublic, now);
    send_datagrams(Node::router, Node::client, in.replies, e.flow);
    if (in.packet) {
      if (allowed({netplan::Zone::tunnel, in.packet->dst, app_protocol(), std::nullopt,
                   netplan::ConnState::new_connection})) {
        send(Node::router, Node::hub, wgtun::encode(*in.packet), e.flow);
      }
    }
  } else {
    const auto packet = wgtun::decode_ip(e.payload);
    if (packet && allowed({packet->src, netplan::Zone::tunnel, app_protocol(), std::nullopt,
                           netplan::ConnState::established})) {
      auto r = router_->seal(*packet, now);
      if (r.status == wgtun::SealStatus::sent) {
        send_datagrams(Node::router, Node::client, r.datagrams, e.flow);
      } else {
        ++result_.counters.tunnel_refused;
      }
    }
  }
  tick(Node::router);
}

void Run::hub_reply(const json& msg, std::uint64_t flow, Millis at) {
  auto deliver = [this, msg, flow] {
    if (tunnel()) {
      send(Node::hub, Node::router, wgtun::encode(wgtun::IpPacket{kHubAddress, kClientTunnelAddress, 6, to_payload(msg)}),
           flow);
    } else {
      send(Node::hub, Node::router, to_payload(msg), flow);
    }
  };
  if (at <= queue_.now()) {
    deliver();
  } else {
    schedule(at, Node::hub, deliver);
  }
}

void Run::on_hub(const Event& e) {
  const Millis now = queue_.now();
  json msg;
  if (tunnel()) {
    const auto packet = wgtun::decode_ip(e.payload);
    if (!packet) return;
    msg = from_payload(packet->payload);
  } else {
    msg = from_payload(e.payload);
  }
  const auto type = msg.value("t", std::string{});
  if (type == "tls") {
    hub_reply({{"t", "tls-ack"}, {"seq", msg["seq"]}, {"step", msg["step"]}}, e.flow, now);
  } else if (type == "req") {
    const auto body = hub_.handle_request({{"key", msg.value("key", "")}, {"on", msg.value("on", false)}}, now,
                                          tls_cost());
    hub_reply({{"t", "rep"}, {"seq", msg["seq"]}, {"body", body}}, e.flow,
              now + tls_cost() + hub_.config().processing_time);
  } else if (type == "chan-ack") {
    hub_channel_up_ = true;
  } else if (type == "chan-cmd" && hub_channel_up_) {
    const auto body = hub_.handle_request({{"key", msg.value("key", "")}, {"on", msg.value("on", false)}}, now);
    const auto at = now + hub_.config().processing_time;
    const json rep = {{"t", "chan-rep"}, {"seq", msg["seq"]}, {"body", body}};
    schedule(at, Node::hub, [this, rep] { send(Node::hub, Node::router, to_payload(rep), 0); });
  }
}

void Run::on_cloud(const Event& e) {
  const Millis now = queue_.now();
  const auto msg = from_payload(e.payload);
  const auto type = msg.value("t", std::string{});
  if (e.from == Node::router) {
    if (type == "chan-open") {
      cloud_.channel_up(now);
      send(Node::cloud, Node::router, to_payload({{"t", "chan-ack"}}), 0);
    }
    return;
  }
  if (type == "tls") {
    send(Node::cloud, Node::client, to_payload({{"t", "tls-ack"}, {"seq", msg["seq"]}, {"step", msg["step"]}}),
         e.flow);
  } else if (type == "req") {
    const auto r = cloud_.relay_command(msg.value("token", ""), now, tls_cost());
    const json body = r.success ? json{{"success", true}} : json{{"error", r.error}};
    const json rep = {{"t", "rep"}, {"seq", msg["seq"]}, {"body", body}};
    const auto flow = e.flow;
    std::optional<json> forward;
    if (r.success) forward = json{{"t", "chan-cmd"}, {"seq", msg["seq"]}, {"key", r.hub_key}, {"on", msg["on"]}};
    schedule(r.ack_at, Node::cloud, [this, rep, flow, forward] {
      send(Node::cloud, Node::client, to_payload(rep), flow);
      if (forward) send(Node::cloud, Node::router, to_payload(*forward), 0);
    });
  }
}

RunResult Run::execute() {
  if (transport_ == Transport::cloud_https && config_.hub_channel) {
    send(Node::hub, Node::router, to_payload({{"t", "chan-open"}}), 0);
  }
  schedule(config_.start_at, Node::client, [this] { issue_next(); });

  while (auto e = queue_.step()) {
    if (done_at_ && queue_.now() - *done_at_ > kDrainLimit) break;
    if (e->kind == Event::Kind::timer) {
      const auto it = timers_.find(e->timer_id);
      if (it == timers_.end()) continue;
      auto fn = std::move(it->second);
      timers_.erase(it);
      fn();
      continue;
    }
    switch (e->to) {
      case Node::client: on_client(*e); break;
      case Node::router: on_router(*e); break;
      case Node::hub: on_hub(*e); break;
      case Node::cloud: on_cloud(*e); break;
    }
  }

  result_.events = hub_.events();
  if (client_) {
    result_.counters.tunnel_handshakes = client_->counters().handshakes_completed;
    result_.counters.tunnel_initiations = client_->counters().initiations_sent;
    result_.counters.tunnel_dropped = client_->counters().dropped + router_->counters().dropped;
    result_.counters.tunnel_data_dropped =
        client_->counters().transport_dropped + router_->counters().transport_dropped;
    result_.counters.tunnel_crossed =
        client_->counters().crossed_initiations + router_->counters().crossed_initiations;
  }
  return std::move(result_);
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& config) { return Run(config).execute(); }

}  // namespace hometunnel::latbench
