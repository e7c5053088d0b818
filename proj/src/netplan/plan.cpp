#include "hometunnel/netplan/plan.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <utility>

namespace hometunnel::netplan {

namespace {

constexpr std::array<std::pair<SubnetCategory, std::string_view>, 9> kCategoryNames = {{
    {SubnetCategory::main_fixed, "main-fixed"},
    {SubnetCategory::main_mobile, "main-mobile"},
    {SubnetCategory::main_gaming, "main-gaming"},
    {SubnetCategory::services, "services"},
    {SubnetCategory::iot_restricted, "iot-restricted"},
    {SubnetCategory::iot_outgoing, "iot-outgoing"},
    {SubnetCategory::media, "media"},
    {SubnetCategory::guest, "guest"},
    {SubnetCategory::parent, "parent"},
}};

bool is_iot(SubnetCategory c) {
  return c == SubnetCategory::iot_restricted || c == SubnetCategory::iot_outgoing;
}

}  // namespace

std::string_view to_string(SubnetCategory c) {
  for (const auto& [cat, name] : kCategoryNames) {
    if (cat == c) return name;
  }
  return "parent";
}

SubnetCategory parse_category(std::string_view name) {
  for (const auto& [cat, n] : kCategoryNames) {
    if (n == name) return cat;
  }
  throw std::invalid_argument("unknown subnet category: " + std::string(name));
}

std::string_view to_string(VpnConfigMode m) {
  switch (m) {
    case VpnConfigMode::standard: return "standard";
    case VpnConfigMode::on_demand: return "on-demand";
    case VpnConfigMode::per_app: return "per-app";
    case VpnConfigMode::always_on: return "always-on";
  }
  return "on-demand";
}

SubnetPlan::SubnetPlan(std::vector<SubnetSpec> subnets, PolicyMatrix policy)
    : subnets_(std::move(subnets)), policy_(std::move(policy)) {
  if (subnets_.empty()) throw std::invalid_argument("plan has no subnets");
  if (!subnets_.front().parent.empty()) throw std::invalid_argument("plan root must not have a parent");

  for (std::size_t i = 0; i < subnets_.size(); ++i) {
    const auto& s = subnets_[i];
    if (s.name.empty()) throw std::invalid_argument("subnet without a name");
    for (std::size_t j = 0; j < i; ++j) {
      if (subnets_[j].name == s.name) throw std::invalid_argument("duplicate subnet name: " + s.name);
    }
    if (i == 0) continue;
    const auto* parent = find(s.parent);
    if (parent == nullptr) throw std::invalid_argument(s.name + ": unknown parent '" + s.parent + "'");
    if (parent->is_leaf()) throw std::invalid_argument(s.name + ": parent '" + s.parent + "' is a leaf");
    if (!parent->network.contains(s.network)) {
      throw std::invalid_argument(s.name + " is not contained in " + parent->name);
    }
  }

  const auto leaves = this->leaves();
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    for (std::size_t j = i + 1; j < leaves.size(); ++j) {
      if (leaves[i]->network.overlaps(leaves[j]->network)) {
        throw std::invalid_argument("leaf subnets overlap: " + leaves[i]->name + " and " + leaves[j]->name);
      }
    }
  }
}

std::vector<const SubnetSpec*> SubnetPlan::leaves() const {
  std::vector<const SubnetSpec*> out;
  for (const auto& s : subnets_) {
    if (s.is_leaf()) out.push_back(&s);
  }
  return out;
}

std::vector<const SubnetSpec*> SubnetPlan::parents() const {
  std::vector<const SubnetSpec*> out;
  for (const auto& s : subnets_) {
    if (!s.is_leaf()) out.push_back(&s);
  }
  return out;
}

const SubnetSpec* SubnetPlan::find(std::string_view name) const {
  for (const auto& s : subnets_) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::optional<std::vector<std::string>> SubnetPlan::classify(Ipv4Address addr) const {
  if (!root().network.contains(addr)) return std::nullopt;
  // Deepest containing subnet, then walk the parent chain back to the root.
  const SubnetSpec* best = &root();
  for (const auto& s : subnets_) {
    if (s.network.contains(addr) && s.network.prefix() > best->network.prefix()) best = &s;
    // Equal-prefix parent/child pairs (none in the default plan) resolve to the child.
    if (s.network.contains(addr) && s.network.prefix() == best->network.prefix() && s.is_leaf()) best = &s;
  }
  std::vector<std::string> path;
  for (const SubnetSpec* s = best; s != nullptr; s = s->parent.empty() ? nullptr : find(s->parent)) {
    path.push_back(s->name);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

SubnetPlan default_plan() {
  const auto net = [](std::uint8_t third, int prefix) {
    return Ipv4Network(Ipv4Address(192, 168, third, 0), prefix);
  };
  std::vector<SubnetSpec> subnets = {
      {"Home", net(0, 16), "", SubnetCategory::parent, ""},
      {"Main", net(0, 20), "", SubnetCategory::parent, "Home"},
      {"Fixed", net(0, 24), "e.g. Computers", SubnetCategory::main_fixed, "Main"},
      {"Mobile", net(1, 24), "e.g. Smart phones/tablets", SubnetCategory::main_mobile, "Main"},
      {"Gaming", net(2, 24), "e.g. Gaming and other consoles", SubnetCategory::main_gaming, "Main"},
      {"Services", net(16, 20), "Network attached services (e.g. NAS/Printer/...)", SubnetCategory::services,
       "Home"},
      {"IoT", net(32, 20), "All IoT (no device-2-device comms by default)", SubnetCategory::parent, "Home"},
      {"restricted", net(32, 24), "No incoming/outgoing (except limited DHCP, NTP, TFTP,...)",
       SubnetCategory::iot_restricted, "IoT"},
      {"Outgoing", net(33, 24), "Enables outgoing connection, and related incoming.",
       SubnetCategory::iot_outgoing, "IoT"},
      {"Media", net(48, 20), "E.g. smart TVs, home theaters", SubnetCategory::media, "Home"},
      {"Guest", net(64, 20), "Internet only, no access to other parts of the network. (e.g. guests' phone)",
       SubnetCategory::guest, "Home"},
  };
  return SubnetPlan(std::move(subnets), default_policy());
}

nlohmann::json to_json(const SubnetPlan& plan) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& s : plan.subnets()) {
    rows.push_back({{"name", s.name},
                    {"ipv4", s.network.base().to_string()},
                    {"hex", s.network.base().to_hex()},
                    {"prefix", s.network.prefix()},
                    {"note", s.note},
                    {"category", to_string(s.category)},
                    {"parent", s.parent.empty() ? nlohmann::json(nullptr) : nlohmann::json(s.parent)}});
  }
  nlohmann::json lines = nlohmann::json::array();
  const std::string text = render_firewall(plan.policy());
  std::size_t start = 0;
  while (start < text.size()) {
    const auto end = text.find('\n', start);
    lines.push_back(text.substr(start, end - start));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return {{"subnets", rows}, {"firewall", lines}};
}

SubnetPlan plan_from_json(const nlohmann::json& doc) {
  std::vector<SubnetSpec> subnets;
  for (const auto& row : doc.at("subnets")) {
    SubnetSpec s;
    s.name = row.at("name").get<std::string>();
    const auto base = Ipv4Address::parse(row.at("ipv4").get<std::string>());
    if (row.contains("hex") && row.at("hex").get<std::string>() != base.to_hex()) {
      throw std::invalid_argument(s.name + ": hex column disagrees with ipv4");
    }
    s.network = Ipv4Network(base, row.at("prefix").get<int>());
    s.note = row.value("note", "");
    s.category = parse_category(row.value("category", "parent"));
    if (row.contains("parent") && !row.at("parent").is_null()) s.parent = row.at("parent").get<std::string>();
    subnets.push_back(std::move(s));
  }
  PolicyMatrix policy;
  if (doc.contains("firewall")) {
    std::string text;
    for (const auto& line : doc.at("firewall")) text += line.get<std::string>() + "\n";
    policy = parse_firewall(text);
  }
  return SubnetPlan(std::move(subnets), std::move(policy));
}

TunnelScope tunnel_scope(const SubnetPlan& plan) {
  TunnelScope scope;
  std::vector<const SubnetSpec*> iot;
  for (const auto* leaf : plan.leaves()) {
    if (is_iot(leaf->category)) iot.push_back(leaf);
  }
  if (iot.empty()) {
    scope.warnings.emplace_back("plan has no IoT subnets; tunnel scope is empty");
    return scope;
  }
  // Smallest parent covering every IoT leaf but no non-IoT leaf.
  const auto leaves = plan.leaves();
  const SubnetSpec* best = nullptr;
  for (const auto* p : plan.parents()) {
    const bool covers = std::all_of(iot.begin(), iot.end(), [&](auto* l) { return p->network.contains(l->network); });
    const bool clean = std::none_of(leaves.begin(), leaves.end(), [&](auto* l) {
      return !is_iot(l->category) && p->network.overlaps(l->network);
    });
    if (covers && clean && (best == nullptr || p->network.prefix() > best->network.prefix())) best = p;
  }
  if (best != nullptr) {
    scope.blocks.push_back(best->network);
  } else {
    for (const auto* l : iot) scope.blocks.push_back(l->network);
  }
  return scope;
}

}  // namespace hometunnel::netplan
