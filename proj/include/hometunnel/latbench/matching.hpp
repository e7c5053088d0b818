#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "hometunnel/hubsim/hub.hpp"
#include "hometunnel/simnet/time.hpp"

namespace hometunnel::latbench {

using simnet::Millis;

/// Client-side view of an issued command.
struct CommandRecord {
  std::uint64_t sequence = 0;
  Millis issued_at{0};
  bool on = true;
  bool ok = true;
};

struct Match {
  std::uint64_t sequence = 0;
  std::size_t event_index = 0;
  Millis actuation_delay{0};
};

struct MatchReport {
  std::vector<Match> matched;
  std::vector<std::uint64_t> unmatched_commands;
  std::vector<std::size_t> orphan_events;  // indices into the event log
};

/// Greedy in issue order. A command is state-changing when its target differs
/// from the last ok command's (the light starts off). It takes the earliest
/// unmatched event of the same transition inside
/// [issue - bound, issue + window + bound]; the delay assumes zero offset.
/// Throws std::invalid_argument when window <= 0 or bound < 0.
[[nodiscard]] MatchReport match_events(const std::vector<CommandRecord>& commands,
                                       const std::vector<hubsim::LightEvent>& events, Millis clock_offset_bound,
                                       Millis window);

[[nodiscard]] nlohmann::json to_json(const MatchReport& report, const std::vector<hubsim::LightEvent>& events);

}  // namespace hometunnel::latbench
