#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hometunnel/netplan/ip.hpp"

namespace hometunnel::netplan {

class SubnetPlan;

enum class Protocol { any, dhcp, ntp, tftp, http, https, tunnel_udp };
enum class Direction { any, inbound, outbound };
enum class ConnState { any, new_connection, established };
enum class Verdict { allow, deny };

/// Throws std::invalid_argument for names it does not know.
[[nodiscard]] Protocol parse_protocol(std::string_view name);
[[nodiscard]] std::string_view to_string(Protocol p);
[[nodiscard]] Direction parse_direction(std::string_view name);
[[nodiscard]] std::string_view to_string(Direction d);
[[nodiscard]] ConnState parse_conn_state(std::string_view name);
[[nodiscard]] std::string_view to_string(ConnState s);
[[nodiscard]] std::string_view to_string(Verdict v);

// Rule selectors: a subnet name (matches any address whose classification
// path contains it), "Internet", "Router", "Tunnel", or "*".
inline constexpr std::string_view kInternet = "Internet";
inline constexpr std::string_view kRouter = "Router";
inline constexpr std::string_view kTunnel = "Tunnel";
inline constexpr std::string_view kAnywhere = "*";

/// Fields set to `any` are wildcards.
struct PolicyRule {
  int id = 0;
  std::string src;
  std::string dst;
  Direction direction = Direction::any;
  Protocol protocol = Protocol::any;
  ConnState state = ConnState::any;
  Verdict verdict = Verdict::deny;

  friend bool operator==(const PolicyRule&, const PolicyRule&) = default;
};

/// Ordered first-match rule list. The final rule is always the catch-all
/// `* -> *` with id kCatchAllId.
class PolicyMatrix {
public:
  static constexpr int kCatchAllId = 65535;

  PolicyMatrix() : PolicyMatrix(std::vector<PolicyRule>{}) {}
  /// Sorts by id. Throws std::invalid_argument on duplicate ids or ids >= kCatchAllId.
  explicit PolicyMatrix(std::vector<PolicyRule> rules, Verdict catch_all = Verdict::deny);

  [[nodiscard]] const std::vector<PolicyRule>& rules() const { return rules_; }
  [[nodiscard]] const PolicyRule* find(int id) const;

  friend bool operator==(const PolicyMatrix&, const PolicyMatrix&) = default;

private:
  std::vector<PolicyRule> rules_;
};

/// The default isolation matrix for the home plan's subnet names.
[[nodiscard]] PolicyMatrix default_policy();

/// One rule per line, ordered by id:
///   `<id> <allow|deny> <src> -> <dst> proto=<p> dir=<d> state=<s>`
[[nodiscard]] std::string render_firewall(const PolicyMatrix& matrix);
/// Inverse of render_firewall; '#' comments and blank lines are skipped.
[[nodiscard]] PolicyMatrix parse_firewall(std::string_view text);

enum class Zone { internet, router, tunnel };
using FlowEndpoint = std::variant<Ipv4Address, Zone>;

struct Flow {
  FlowEndpoint src;
  FlowEndpoint dst;
  Protocol protocol = Protocol::http;
  std::optional<Direction> direction;  // inferred when empty
  ConnState state = ConnState::new_connection;
};

struct FlowDecision {
  Verdict verdict = Verdict::deny;
  int matched_rule = 0;
};

/// Inbound when the source is outside the home (Internet, tunnel, or an
/// address outside the plan root); outbound otherwise.
[[nodiscard]] Direction infer_direction(const SubnetPlan& plan, const FlowEndpoint& src);

/// First match over the plan's rules. Throws std::invalid_argument when the
/// flow carries a wildcard protocol or state.
[[nodiscard]] FlowDecision evaluate_policy(const SubnetPlan& plan, const Flow& flow);

}  // namespace hometunnel::netplan
