#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hometunnel/netplan/ip.hpp"
#include "hometunnel/netplan/policy.hpp"

namespace hometunnel::netplan {

enum class SubnetCategory {
  main_fixed,
  main_mobile,
  main_gaming,
  services,
  iot_restricted,
  iot_outgoing,
  media,
  guest,
  parent,
};

[[nodiscard]] std::string_view to_string(SubnetCategory c);
[[nodiscard]] SubnetCategory parse_category(std::string_view name);

/// Remote-access VPN configuration styles. Only on-demand is exercised by
/// the benchmark; the others exist for documentation.
enum class VpnConfigMode { standard, on_demand, per_app, always_on };
[[nodiscard]] std::string_view to_string(VpnConfigMode m);

struct SubnetSpec {
  std::string name;
  Ipv4Network network;
  std::string note;
  SubnetCategory category = SubnetCategory::parent;
  std::string parent;  // empty for the root

  [[nodiscard]] bool is_leaf() const { return category != SubnetCategory::parent; }

  friend bool operator==(const SubnetSpec&, const SubnetSpec&) = default;
};

/// Immutable subnet hierarchy plus its firewall matrix.
class SubnetPlan {
public:
  /// First entry is the root. Throws std::invalid_argument when the hierarchy
  /// is malformed (unknown or non-containing parent, overlapping leaves,
  /// duplicate names).
  SubnetPlan(std::vector<SubnetSpec> subnets, PolicyMatrix policy);

  [[nodiscard]] const SubnetSpec& root() const { return subnets_.front(); }
  [[nodiscard]] const std::vector<SubnetSpec>& subnets() const { return subnets_; }
  [[nodiscard]] std::vector<const SubnetSpec*> leaves() const;
  [[nodiscard]] std::vector<const SubnetSpec*> parents() const;
  [[nodiscard]] const SubnetSpec* find(std::string_view name) const;
  [[nodiscard]] const PolicyMatrix& policy() const { return policy_; }

  /// Names root -> deepest containing subnet; nullopt ("unassigned") outside the root.
  [[nodiscard]] std::optional<std::vector<std::string>> classify(Ipv4Address addr) const;

  friend bool operator==(const SubnetPlan&, const SubnetPlan&) = default;

private:
  std::vector<SubnetSpec> subnets_;
  PolicyMatrix policy_;
};

/// The segmented home: Main (fixed/mobile/gaming), Services, IoT
/// (restricted/outgoing), Media and Guest under 192.168.0.0/16.
[[nodiscard]] SubnetPlan default_plan();

/// {"subnets": [{name, ipv4, hex, prefix, note, category, parent}...], "firewall": [lines]}
[[nodiscard]] nlohmann::json to_json(const SubnetPlan& plan);
[[nodiscard]] SubnetPlan plan_from_json(const nlohmann::json& doc);

struct TunnelScope {
  std::vector<Ipv4Network> blocks;
  std::vector<std::string> warnings;
};

/// Allowed-IP set handed to remote tunnel peers: the smallest parent covering
/// every IoT leaf (or the leaves themselves when no such parent exists).
[[nodiscard]] TunnelScope tunnel_scope(const SubnetPlan& plan);

}  // namespace hometunnel::netplan
