#pragma once

#include "hometunnel/latbench/scenario.hpp"

namespace hometunnel::latbench {

// Fixed round-trip laws (min, mean, sd) of the segments around the access link.
inline constexpr double kHomeLanRtt[3] = {0.3, 0.5, 0.1};
inline constexpr double kHomeUplinkRtt[3] = {8.0, 10.0, 2.0};
inline constexpr double kCloudLinkRtt[3] = {15.0, 18.0, 3.0};
inline constexpr double kHubProcessingMs = 28.0;
inline constexpr double kCloudProcessingMs = 50.0;
inline constexpr double kCloudCryptoMs = 5.0;

/// Per-request TLS cost over the tunnel for a network: the HTTPS floor minus
/// the HTTP floor measured on the same access network.
[[nodiscard]] Millis wg_tls_crypto_cost(ScenarioId id);

/// Fits the access link so the composed end-to-end delay hits the published
/// target, the other segments and processing times being fixed.
[[nodiscard]] ScenarioConfig default_calibration(ScenarioId id);

/// The smallest delay any sample can show under `config`.
[[nodiscard]] Millis configured_floor(const ScenarioConfig& config);
/// Expected sample mean under `config`, handshake costs amortized over the run.
[[nodiscard]] Millis expected_mean(const ScenarioConfig& config);

}  // namespace hometunnel::latbench
