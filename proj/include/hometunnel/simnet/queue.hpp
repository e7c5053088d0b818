#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hometunnel/simnet/link.hpp"
#include "hometunnel/simnet/time.hpp"

namespace hometunnel::simnet {

enum class Node { client, router, hub, cloud };

[[nodiscard]] std::string_view to_string(Node n);
/// Throws std::invalid_argument on unknown names.
[[nodiscard]] Node parse_node(std::string_view text);

using Payload = std::vector<std::uint8_t>;

/// A path between two nodes: a chain of segments whose one-way delays add up.
/// Ordered links never deliver out of send order in either direction.
struct Link {
  std::vector<LinkModel> segments;
  bool ordered = false;
};

class Topology {
public:
  Topology() = default;
  explicit Topology(std::string scenario) : scenario_(std::move(scenario)) {}

  /// Throws std::invalid_argument on self-links, empty chains or invalid segments.
  void connect(Node a, Node b, std::vector<LinkModel> segments, bool ordered = false);
  [[nodiscard]] const Link* find(Node a, Node b) const;
  [[nodiscard]] bool connected(Node a, Node b) const { return find(a, b) != nullptr; }
  [[nodiscard]] const std::map<std::pair<Node, Node>, Link>& links() const { return links_; }
  [[nodiscard]] const std::string& scenario() const { return scenario_; }

private:
  std::string scenario_;
  std::map<std::pair<Node, Node>, Link> links_;  // keyed with first <= second
};

/// {"scenario": "...", "links": [{"a": "client", "b": "router", "ordered": false,
///   "segments": [<link json>, ...]}]}
[[nodiscard]] Topology topology_from_json(const nlohmann::json& doc);
[[nodiscard]] nlohmann::json to_json(const Topology& topology);

struct Event {
  enum class Kind { delivery, timer };
  Kind kind = Kind::delivery;
  Millis time{0};
  Node from = Node::client;
  Node to = Node::client;
  std::uint64_t flow = 0;
  std::uint64_t timer_id = 0;
  Payload payload;
};

struct Drop {
  Millis time{0};
  Node from;
  Node to;
  std::uint64_t flow;
  std::string segment;
};

/// Discrete-event loop over a topology. Events pop in (time, insertion) order.
///
/// Sends that carry a nonzero flow id pair up: the first send of a flow over a
/// link draws the per-segment delays and the next send of that flow over the
/// same link (normally the reply) reuses them, so a request/reply exchange
/// takes exactly one draw of the round-trip law.
class EventQueue {
public:
  EventQueue(Topology topology, std::uint64_t seed);

  /// Empty when the datagram is lost. Throws std::invalid_argument when no link joins the nodes.
  std::optional<Millis> send(Node from, Node to, Payload payload, std::uint64_t flow = 0);
  /// Schedules a timer for `target` at absolute time `at` (clamped to now).
  void schedule_timer(Millis at, Node target, std::uint64_t timer_id);

  std::optional<Event> step();
  [[nodiscard]] bool empty() const { return pending_.empty(); }
  [[nodiscard]] std::size_t size() const { return pending_.size(); }
  [[nodiscard]] Millis now() const { return now_; }
  [[nodiscard]] const std::vector<Drop>& drops() const { return drops_; }
  [[nodiscard]] const Topology& topology() const { return topology_; }
  /// Auxiliary stream for callers that need run-scoped randomness.
  DelayStream& stream(std::string_view label);

private:
  struct Entry {
    Millis time;
    std::uint64_t seq;
    Event event;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  using LinkKey = std::pair<Node, Node>;

  std::uint64_t seed_;
  Topology topology_;
  Millis now_{0};
  std::uint64_t seq_ = 0;
  std::priority_queue<Entry, std::vector<Entry>, Later> pending_;
  std::map<std::string, DelayStream> streams_;
  std::map<std::pair<std::uint64_t, LinkKey>, std::vector<Millis>> paired_;
  std::map<std::pair<Node, Node>, Millis> last_delivery_;  // directed, ordered links only
  std::vector<Drop> drops_;
};

}  // namespace hometunnel::simnet
