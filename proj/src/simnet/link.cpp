#include "hometunnel/simnet/link.hpp"

#include <cmath>
#include <stdexcept>

namespace hometunnel::simnet {

void LinkModel::validate() const {
  if (!std::isfinite(min_delay.count()) || min_delay.count() < 0) {
    throw std::invalid_argument(name + ": min delay must be finite and >= 0");
  }
  if (!std::isfinite(mu_log) || !std::isfinite(sigma_log) || sigma_log < 0) {
    throw std::invalid_argument(name + ": sigma_log must be finite and >= 0");
  }
  if (!(loss_rate >= 0.0 && loss_rate <= 1.0)) throw std::invalid_argument(name + ": loss rate must be in [0, 1]");
}

Millis LinkModel::mean() const {
  return min_delay + Millis{std::exp(mu_log + sigma_log * sigma_log / 2)};
}

Millis LinkModel::standard_deviation() const {
  const double s2 = sigma_log * sigma_log;
  return Millis{std::sqrt(std::expm1(s2)) * std::exp(mu_log + s2 / 2)};
}

LinkModel fit_link_model(Millis min, Millis mean, Millis sd, std::string name, double loss_rate) {
  if (!(mean > min)) throw std::invalid_argument(name + ": mean must exceed min");
  if (sd.count() < 0) throw std::invalid_argument(name + ": sd must be >= 0");
  const double excess = (mean - min).count();
  const double cv = sd.count() / excess;
  LinkModel link;
  link.name = std::move(name);
  link.min_delay = min;
  link.sigma_log = std::sqrt(std::log1p(cv * cv));
  link.mu_log = std::log(excess) - link.sigma_log * link.sigma_log / 2;
  link.loss_rate = loss_rate;
  link.validate();
  return link;
}

LinkModel one_way(const LinkModel& round_trip) {
  LinkModel leg = round_trip;
  leg.min_delay = round_trip.min_delay / 2;
  leg.mu_log = round_trip.mu_log - std::log(2.0);
  return leg;
}

Millis sample_delay(const LinkModel& link, DelayStream& stream) {
  const double z = stream.normal();
  return link.min_delay + Millis{std::exp(link.mu_log + link.sigma_log * z)};
}

bool sample_loss(const LinkModel& link, DelayStream& stream) {
  if (link.loss_rate <= 0.0) return false;
  return stream.uniform() < link.loss_rate;
}

std::uint64_t substream_seed(std::uint64_t seed, std::string_view label) {
  // FNV-1a over the label, folded with the run seed through splitmix64.
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const char c : label) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001b3ull;
  }
  std::uint64_t z = seed ^ h;
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

LinkModel link_from_json(const nlohmann::json& doc) {
  try {
    const std::string name = doc.value("name", std::string("link"));
    const double loss = doc.value("loss", 0.0);
    const Millis min{doc.value("min", 0.0)};
    if (doc.contains("mu_log")) {
      LinkModel link{name, min, doc.at("mu_log").get<double>(), doc.value("sigma_log", 0.0), loss};
      link.validate();
      return link;
    }
    return fit_link_model(min, Millis{doc.at("mean").get<double>()}, Millis{doc.at("sd").get<double>()}, name,
                          loss);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("link config: ") + e.what());
  }
}

nlohmann::json to_json(const LinkModel& link) {
  return {{"name", link.name},
          {"min", link.min_delay.count()},
          {"mu_log", link.mu_log},
          {"sigma_log", link.sigma_log},
          {"loss", link.loss_rate}};
}

}  // namespace hometunnel::simnet
