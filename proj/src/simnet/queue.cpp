#include "hometunnel/simnet/queue.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace hometunnel::simnet {

namespace {

std::pair<Node, Node> key(Node a, Node b) { return a <= b ? std::pair{a, b} : std::pair{b, a}; }

}  // namespace

std::string_view to_string(Node n) {
  switch (n) {
    case Node::client: return "client";
    case Node::router: return "router";
    case Node::hub: return "hub";
    case Node::cloud: return "cloud";
  }
  return "?";
}

Node parse_node(std::string_view text) {
  for (const Node n : {Node::client, Node::router, Node::hub, Node::cloud}) {
    if (to_string(n) == text) return n;
  }
  throw std::invalid_argument("unknown node: " + std::string(text));
}

void Topology::connect(Node a, Node b, std::vector<LinkModel> segments, bool ordered) {
  if (a == b) throw std::invalid_argument("link endpoints must differ");
  if (segments.empty()) throw std::invalid_argument("link needs at least one segment");
  for (const auto& s : segments) s.validate();
  links_[key(a, b)] = Link{std::move(segments), ordered};
}

const Link* Topology::find(Node a, Node b) const {
  const auto it = links_.find(key(a, b));
  return it == links_.end() ? nullptr : &it->second;
}

Topology topology_from_json(const nlohmann::json& doc) {
  try {
    Topology t(doc.value("scenario", std::string{}));
    for (const auto& l : doc.at("links")) {
      std::vector<LinkModel> segments;
      for (const auto& s : l.at("segments")) segments.push_back(link_from_json(s));
      t.connect(parse_node(l.at("a").get<std::string>()), parse_node(l.at("b").get<std::string>()),
                std::move(segments), l.value("ordered", false));
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("topology config: ") + e.what());
  }
}

nlohmann::json to_json(const Topology& topology) {
  nlohmann::json links = nlohmann::json::array();
  for (const auto& [k, link] : topology.links()) {
    nlohmann::json segs = nlohmann::json::array();
    for (const auto& s : link.segments) segs.push_back(to_json(s));
    links.push_back({{"a", to_string(k.first)}, {"b", to_string(k.second)}, {"ordered", link.ordered},
                     {"segments", segs}});
  }
  return {{"scenario", topology.scenario()}, {"links", links}};
}

EventQueue::EventQueue(Topology topology, std::uint64_t seed) : seed_(seed), topology_(std::move(topology)) {}

DelayStream& EventQueue::stream(std::string_view label) {
  auto it = streams_.find(std::string(label));
  if (it == streams_.end()) {
    it = streams_.emplace(std::string(label), DelayStream(substream_seed(seed_, label))).first;
  }
  return it->second;
}

std::optional<Millis> EventQueue::send(Node from, Node to, Payload payload, std::uint64_t flow) {
  const Link* link = topology_.find(from, to);
  if (!link) {
    throw std::invalid_argument("no link " + std::string(to_string(from)) + " -> " + std::string(to_string(to)));
  }
  const LinkKey k = key(from, to);
  const std::string prefix = std::string(to_string(k.first)) + "-" + std::string(to_string(k.second)) + "/";

  for (const auto& seg : link->segments) {
    if (sample_loss(seg, stream(prefix + seg.name + "/loss"))) {
      drops_.push_back({now_, from, to, flow, seg.name});
      return std::nullopt;
    }
  }

  std::vector<Millis> legs;
  const auto paired = flow != 0 ? paired_.find({flow, k}) : paired_.end();
  if (paired != paired_.end()) {
    legs = std::move(paired->second);
    paired_.erase(paired);
  } else {
    for (const auto& seg : link->segments) legs.push_back(sample_delay(seg, stream(prefix + seg.name)));
    if (flow != 0) paired_[{flow, k}] = legs;
  }

  Millis at = now_;
  for (const auto d : legs) at += d;
  if (link->ordered) {
    auto& last = last_delivery_[{from, to}];
    at = std::max(at, last);
    last = at;
  }

  Event e;
  e.kind = Event::Kind::delivery;
  e.time = at;
  e.from = from;
  e.to = to;
  e.flow = flow;
  e.payload = std::move(payload);
  pending_.push(Entry{at, seq_++, std::move(e)});
  return at;
}

void EventQueue::schedule_timer(Millis at, Node target, std::uint64_t timer_id) {
  Event e;
  e.kind = Event::Kind::timer;
  e.time = std::max(at, now_);
  e.from = target;
  e.to = target;
  e.timer_id = timer_id;
  pending_.push(Entry{e.time, seq_++, std::move(e)});
}

std::optional<Event> EventQueue::step() {
  if (pending_.empty()) return std::nullopt;
  Entry top = pending_.top();
  pending_.pop();
  now_ = top.time;
  return std::move(top.event);
}

}  // namespace hometunnel::simnet
