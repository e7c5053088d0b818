#pragma once

#include <cstdint>
#include <random>
#include <string>

#include <json.hpp>

#include "hometunnel/simnet/time.hpp"

namespace hometunnel::simnet {

/// Shifted lognormal delay: min_delay + exp(mu_log + sigma_log * Z), Z ~ N(0, 1).
struct LinkModel {
  std::string name;
  Millis min_delay{0};
  double mu_log = 0.0;
  double sigma_log = 0.0;
  double loss_rate = 0.0;

  /// Throws std::invalid_argument on negative delay/sigma, non-finite values or
  /// loss outside [0, 1]. A loss of 1 models a severed link.
  void validate() const;

  [[nodiscard]] Millis mean() const;
  [[nodiscard]] Millis standard_deviation() const;

  friend bool operator==(const LinkModel&, const LinkModel&) = default;
};

/// Method-of-moments fit on the excess over `min`. Throws std::invalid_argument
/// when mean <= min or sd < 0.
[[nodiscard]] LinkModel fit_link_model(Millis min, Millis mean, Millis sd, std::string name = "link",
                                       double loss_rate = 0.0);

/// The same law scaled by one half: a round-trip model turned into its one-way leg.
[[nodiscard]] LinkModel one_way(const LinkModel& round_trip);

/// Random stream owned by one link segment.
class DelayStream {
public:
  explicit DelayStream(std::uint64_t seed) : engine_(seed) {}

  [[nodiscard]] double normal() { return normal_(engine_); }
  [[nodiscard]] double uniform() { return uniform_(engine_); }
  std::mt19937_64& engine() { return engine_; }

private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

[[nodiscard]] Millis sample_delay(const LinkModel& link, DelayStream& stream);

/// Loss draw; true when the datagram is lost.
[[nodiscard]] bool sample_loss(const LinkModel& link, DelayStream& stream);

/// Seed for the substream named `label` under a run seed.
[[nodiscard]] std::uint64_t substream_seed(std::uint64_t seed, std::string_view label);

/// Accepts {name, min, mean, sd, loss} (fitted) or {name, min, mu_log, sigma_log, loss}.
[[nodiscard]] LinkModel link_from_json(const nlohmann::json& doc);
[[nodiscard]] nlohmann::json to_json(const LinkModel& link);

}  // namespace hometunnel::simnet
