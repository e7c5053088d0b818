#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hometunnel/hubsim/hub.hpp"
#include "hometunnel/latbench/matching.hpp"
#include "hometunnel/latbench/sample.hpp"
#include "hometunnel/latbench/scenario.hpp"

namespace hometunnel::latbench {

struct RunCounters {
  std::uint64_t tunnel_handshakes = 0;      // completed on the client
  std::uint64_t tunnel_initiations = 0;     // sent by the client, retries included
  std::uint64_t tunnel_dropped = 0;         // datagrams the devices discarded
  std::uint64_t tunnel_data_dropped = 0;    // transport messages among them
  std::uint64_t tunnel_crossed = 0;         // initiations that crossed the peer's own
  std::uint64_t tunnel_refused = 0;         // packets the devices would not seal
  std::uint64_t policy_denied = 0;          // flows the router firewall dropped
  std::uint64_t link_drops = 0;             // datagrams lost in the simulated network
};

struct RunResult {
  ScenarioId id = ScenarioId::lan_local;
  std::vector<DelaySample> samples;
  std::vector<CommandRecord> commands;
  std::vector<hubsim::LightEvent> events;
  Millis monitor_offset{0};
  /// Commands whose first packet had to wait for a tunnel handshake.
  std::vector<std::uint64_t> handshake_waits;
  RunCounters counters;
};

/// Issues the configured commands one at a time (the next goes out on the
/// previous reply or timeout) over the scenario's path. Deterministic per
/// config. Throws std::invalid_argument on an invalid config.
[[nodiscard]] RunResult run_scenario(const ScenarioConfig& config);

}  // namespace hometunnel::latbench
