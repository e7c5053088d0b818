#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hometunnel/statkit/descriptive.hpp"

namespace hometunnel::statkit {

/// One column of a published statistics table. `count` is zero: the source
/// tables never report n.
struct PublishedColumn {
  std::string network;
  std::string column;
  StatsSummary summary;
};

/// The eleven delay columns of the measurement study (LAN, cloud over guest
/// WiFi, and WG-HTTP / WG-HTTPS / Cloud over 4G, office and public WiFi).
[[nodiscard]] const std::vector<PublishedColumn>& published_columns();

struct RelationCheck {
  std::string relation;
  double published = 0;
  double predicted = 0;
  double relative_error = 0;
  bool pass = false;
};

struct ConsistencyReport {
  std::string label;
  double implied_n = 0;
  // Set when the check was refused (implied n below 2 leaves no degrees of freedom).
  std::optional<std::string> refused;
  std::vector<RelationCheck> relations;

  [[nodiscard]] bool pass() const;
};

/// Recovers n = (sd / se)^2 and checks the published rows against each other:
/// CI half-width vs t(0.975, n-1) * se, range vs max - min, variance vs sd^2.
[[nodiscard]] ConsistencyReport consistency_check(const StatsSummary& published, double tolerance,
                                                  std::string label = {});

}  // namespace hometunnel::statkit
