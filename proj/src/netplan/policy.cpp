#include "hometunnel/netplan/policy.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "hometunnel/netplan/plan.hpp"

namespace hometunnel::netplan {

namespace {

template <class E, std::size_t N>
E lookup(const std::array<std::pair<E, std::string_view>, N>& table, std::string_view name, const char* what) {
  for (const auto& [value, n] : table) {
    if (n == name) return value;
  }
  throw std::invalid_argument(std::string("unknown ") + what + ": " + std::string(name));
}

template <class E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table, E value) {
  for (const auto& [v, n] : table) {
    if (v == value) return n;
  }
  return "?";
}

constexpr std::array<std::pair<Protocol, std::string_view>, 7> kProtocols = {{
    {Protocol::any, "any"},
    {Protocol::dhcp, "dhcp"},
    {Protocol::ntp, "ntp"},
    {Protocol::tftp, "tftp"},
    {Protocol::http, "http"},
    {Protocol::https, "https"},
    {Protocol::tunnel_udp, "tunnel-udp"},
}};
constexpr std::array<std::pair<Direction, std::string_view>, 3> kDirections = {{
    {Direction::any, "any"},
    {Direction::inbound, "inbound"},
    {Direction::outbound, "outbound"},
}};
constexpr std::array<std::pair<ConnState, std::string_view>, 3> kStates = {{
    {ConnState::any, "any"},
    {ConnState::new_connection, "new"},
    {ConnState::established, "established"},
}};
constexpr std::array<std::pair<Verdict, std::string_view>, 2> kVerdicts = {{
    {Verdict::allow, "allow"},
    {Verdict::deny, "deny"},
}};

// Names a flow endpoint answers to: the classification path for home
// addresses, otherwise the zone name.
std::vector<std::string> labels_of(const SubnetPlan& plan, const FlowEndpoint& ep) {
  if (const auto* zone = std::get_if<Zone>(&ep)) {
    switch (*zone) {
      case Zone::internet: return {std::string(kInternet)};
      case Zone::router: return {std::string(kRouter)};
      case Zone::tunnel: return {std::string(kTunnel)};
    }
  }
  const auto addr = std::get<Ipv4Address>(ep);
  if (auto path = plan.classify(addr)) return *path;
  return {std::string(kInternet)};
}

bool selector_matches(std::string_view selector, const std::vector<std::string>& labels) {
  if (selector == kAnywhere) return true;
  return std::find(labels.begin(), labels.end(), selector) != labels.end();
}

PolicyRule rule(int id, std::string src, std::string dst, Protocol protocol, Direction direction,
                ConnState state, Verdict verdict) {
  return {id, std::move(src), std::move(dst), direction, protocol, state, verdict};
}

}  // namespace

Protocol parse_protocol(std::string_view name) { return lookup(kProtocols, name, "protocol"); }
std::string_view to_string(Protocol p) { return name_of(kProtocols, p); }
Direction parse_direction(std::string_view name) { return lookup(kDirections, name, "direction"); }
std::string_view to_string(Direction d) { return name_of(kDirections, d); }
ConnState parse_conn_state(std::string_view name) { return lookup(kStates, name, "connection state"); }
std::string_view to_string(ConnState s) { return name_of(kStates, s); }
std::string_view to_string(Verdict v) { return name_of(kVerdicts, v); }

PolicyMatrix::PolicyMatrix(std::vector<PolicyRule> rules, Verdict catch_all) : rules_(std::move(rules)) {
  std::sort(rules_.begin(), rules_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    if (rules_[i].id >= kCatchAllId || rules_[i].id < 0) {
      throw std::invalid_argument("rule id out of range: " + std::to_string(rules_[i].id));
    }
    if (i > 0 && rules_[i].id == rules_[i - 1].id) {
      throw std::invalid_argument("duplicate rule id: " + std::to_string(rules_[i].id));
    }
  }
  rules_.push_back(rule(kCatchAllId, std::string(kAnywhere), std::string(kAnywhere), Protocol::any,
                        Direction::any, ConnState::any, catch_all));
}

const PolicyRule* PolicyMatrix::find(int id) const {
  for (const auto& r : rules_) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

PolicyMatrix default_policy() {
  using enum Protocol;
  using enum Verdict;
  constexpr auto in = Direction::inbound;
  constexpr auto out = Direction::outbound;
  constexpr auto any_dir = Direction::any;
  constexpr auto any_state = ConnState::any;
  constexpr auto est = ConnState::established;

  std::vector<PolicyRule> rules = {
      // Remote access: tunnel UDP terminates on the router, decapsulated
      // traffic may only reach the IoT block.
      rule(10, "Internet", "Router", tunnel_udp, in, any_state, allow),
      rule(20, "Tunnel", "IoT", any, any_dir, any_state, allow),
      rule(21, "IoT", "Tunnel", any, any_dir, est, allow),
      rule(22, "Tunnel", "*", any, any_dir, any_state, deny),
      // No device-to-device traffic inside IoT.
      rule(30, "IoT", "IoT", any, any_dir, any_state, deny),

      // Guest: Internet only.
      rule(40, "Guest", "Router", dhcp, out, any_state, allow),
      rule(41, "Guest", "Internet", any, out, any_state, allow),
      rule(42, "Guest", "Home", any, any_dir, any_state, deny),
      rule(43, "Guest", "Router", any, any_dir, any_state, deny),
      rule(44, "Internet", "Guest", any, in, est, allow),
      rule(45, "*", "Guest", any, any_dir, any_state, deny),

      // IoT restricted: limited DHCP/NTP/TFTP to the router and local
      // servers; only NTP may leave the house.
      rule(50, "restricted", "Router", dhcp, out, any_state, allow),
      rule(51, "restricted", "Router", ntp, out, any_state, allow),
      rule(52, "restricted", "Router", tftp, out, any_state, allow),
      rule(53, "restricted", "Services", ntp, out, any_state, allow),
      rule(54, "restricted", "Services", tftp, out, any_state, allow),
      rule(55, "restricted", "Internet", ntp, out, any_state, allow),
      rule(56, "*", "restricted", dhcp, any_dir, est, allow),
      rule(57, "*", "restricted", ntp, any_dir, est, allow),
      rule(58, "*", "restricted", tftp, any_dir, est, allow),
      rule(59, "restricted", "*", any, any_dir, any_state, deny),
      rule(60, "*", "restricted", any, any_dir, any_state, deny),

      // IoT outgoing: outgoing connections and related incoming.
      rule(70, "Outgoing", "Router", dhcp, out, any_state, allow),
      rule(71, "Outgoing", "Router", ntp, out, any_state, allow),
      rule(72, "Outgoing", "Internet", any, out, any_state, allow),
      rule(73, "Internet", "Outgoing", any, in, est, allow),
      rule(74, "Outgoing", "*", any, any_dir, any_state, deny),
      rule(75, "*", "Outgoing", any, any_dir, any_state, deny),

      // Main, Services, Media: Main may open connections into Services and
      // Media but not the reverse; all three may reach the Internet.
      rule(80, "Main", "Main", any, any_dir, any_state, allow),
      rule(81, "Main", "Services", any, out, any_state, allow),
      rule(82, "Main", "Media", any, out, any_state, allow),
      rule(83, "Services", "Main", any, any_dir, est, allow),
      rule(84, "Media", "Main", any, any_dir, est, allow),
      rule(85, "Main", "Internet", any, out, any_state, allow),
      rule(86, "Services", "Internet", any, out, any_state, allow),
      rule(87, "Media", "Internet", any, out, any_state, allow),
      rule(88, "Internet", "Main", any, in, est, allow),
      rule(89, "Internet", "Services", any, in, est, allow),
      rule(90, "Internet", "Media", any, in, est, allow),

      // Router services for the rest of the house.
      rule(100, "Home", "Router", dhcp, out, any_state, allow),
      rule(101, "Home", "Router", ntp, out, any_state, allow),
      rule(102, "Main", "Router", any, out, any_state, allow),
  };
  return PolicyMatrix(std::move(rules));
}

std::string render_firewall(const PolicyMatrix& matrix) {
  std::ostringstream out;
  for (const auto& r : matrix.rules()) {
    out << r.id << ' ' << to_string(r.verdict) << ' ' << r.src << " -> " << r.dst
        << " proto=" << to_string(r.protocol) << " dir=" << to_string(r.direction)
        << " state=" << to_string(r.state) << '\n';
  }
  return out.str();
}

PolicyMatrix parse_firewall(std::string_view text) {
  std::vector<PolicyRule> rules;
  std::optional<Verdict> catch_all;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream fields(line);
    PolicyRule r;
    std::string verdict, arrow, proto, dir, state;
    if (!(fields >> r.id >> verdict >> r.src >> arrow >> r.dst >> proto >> dir >> state) || arrow != "->" ||
        !proto.starts_with("proto=") || !dir.starts_with("dir=") || !state.starts_with("state=")) {
      throw std::invalid_argument("malformed firewall line " + std::to_string(line_no) + ": " + line);
    }
    r.verdict = lookup(kVerdicts, verdict, "verdict");
    r.protocol = parse_protocol(proto.substr(6));
    r.direction = parse_direction(dir.substr(4));
    r.state = parse_conn_state(state.substr(6));
    if (r.id == PolicyMatrix::kCatchAllId) {
      catch_all = r.verdict;
      continue;
    }
    rules.push_back(std::move(r));
  }
  return PolicyMatrix(std::move(rules), catch_all.value_or(Verdict::deny));
}

Direction infer_direction(const SubnetPlan& plan, const FlowEndpoint& src) {
  if (const auto* zone = std::get_if<Zone>(&src)) {
    return *zone == Zone::router ? Direction::outbound : Direction::inbound;
  }
  return plan.classify(std::get<Ipv4Address>(src)) ? Direction::outbound : Direction::inbound;
}

FlowDecision evaluate_policy(const SubnetPlan& plan, const Flow& flow) {
  if (flow.protocol == Protocol::any) throw std::invalid_argument("flow protocol must be concrete");
  if (flow.state == ConnState::any) throw std::invalid_argument("flow connection state must be concrete");
  const Direction direction = flow.direction.value_or(infer_direction(plan, flow.src));
  if (direction == Direction::any) throw std::invalid_argument("flow direction must be concrete");

  const auto src = labels_of(plan, flow.src);
  const auto dst = labels_of(plan, flow.dst);
  for (const auto& r : plan.policy().rules()) {
    if (r.protocol != Protocol::any && r.protocol != flow.protocol) continue;
    if (r.direction != Direction::any && r.direction != direction) continue;
    if (r.state != ConnState::any && r.state != flow.state) continue;
    if (!selector_matches(r.src, src) || !selector_matches(r.dst, dst)) continue;
    return {r.verdict, r.id};
  }
  // Unreachable: the catch-all matches everything.
  return {Verdict::deny, PolicyMatrix::kCatchAllId};
}

}  // namespace hometunnel::netplan
