#include "hometunnel/latbench/matching.hpp"

#include <stdexcept>

namespace hometunnel::latbench {

MatchReport match_events(const std::vector<CommandRecord>& commands, const std::vector<hubsim::LightEvent>& events,
                         Millis clock_offset_bound, Millis window) {
  if (!(window.count() > 0)) throw std::invalid_argument("match window must be positive");
  if (clock_offset_bound.count() < 0) throw std::invalid_argument("clock offset bound must be >= 0");

  MatchReport report;
  std::vector<bool> used(events.size(), false);
  bool light_on = false;
  for (const auto& c : commands) {
    if (!c.ok || c.on == light_on) continue;
    light_on = c.on;
    const auto wanted = c.on ? hubsim::Transition::off_to_on : hubsim::Transition::on_to_off;
    const Millis lo = c.issued_at - clock_offset_bound;
    const Millis hi = c.issued_at + window + clock_offset_bound;
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < events.size(); ++i) {
      const auto& e = events[i];
      if (used[i] || e.transition != wanted || e.monitor_time < lo || e.monitor_time > hi) continue;
      if (!best || e.monitor_time < events[*best].monitor_time) best = i;
    }
    if (best) {
      used[*best] = true;
      report.matched.push_back({c.sequence, *best, events[*best].monitor_time - c.issued_at});
    } else {
      report.unmatched_commands.push_back(c.sequence);
    }
  }
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (!used[i]) report.orphan_events.push_back(i);
  }
  return report;
}

nlohmann::json to_json(const MatchReport& report, const std::vector<hubsim::LightEvent>& events) {
  nlohmann::json matched = nlohmann::json::array();
  for (const auto& m : report.matched) {
    matched.push_back({{"sequence", m.sequence},
                       {"event_index", m.event_index},
                       {"actuation_delay_ms", m.actuation_delay.count()}});
  }
  nlohmann::json orphans = nlohmann::json::array();
  for (const auto i : report.orphan_events) {
    nlohmann::json o = {{"event_index", i}};
    if (i < events.size()) {
      o["monitor_ms"] = events[i].monitor_time.count();
      o["transition"] = hubsim::to_string(events[i].transition);
    }
    orphans.push_back(o);
  }
  return {{"matched", matched}, {"unmatched_commands", report.unmatched_commands}, {"orphan_events", orphans}};
}

}  // namespace hometunnel::latbench
