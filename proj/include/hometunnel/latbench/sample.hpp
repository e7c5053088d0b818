#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hometunnel/simnet/time.hpp"

namespace hometunnel::latbench {

using simnet::Millis;

enum class SampleStatus { ok, failed };
[[nodiscard]] std::string_view to_string(SampleStatus s);

/// One command round trip. Failed samples carry no delay.
struct DelaySample {
  std::uint64_t sequence = 0;
  Millis issued_at{0};
  Millis replied_at{0};
  std::optional<Millis> delay;
  SampleStatus status = SampleStatus::ok;

  friend bool operator==(const DelaySample&, const DelaySample&) = default;
};

/// Delays of the ok samples only, in sequence order.
[[nodiscard]] std::vector<double> ok_delays(const std::vector<DelaySample>& samples);

struct SampleSet {
  std::string scenario;
  std::vector<DelaySample> samples;
};

/// Header `scenario,seq,issued_ms,replied_ms,delay_ms,status`, one row per sample.
[[nodiscard]] std::string samples_csv(std::string_view scenario, const std::vector<DelaySample>& samples);
/// Exact inverse of samples_csv. Throws std::invalid_argument on malformed rows
/// or rows from more than one scenario.
[[nodiscard]] SampleSet samples_from_csv(std::string_view text);

/// Throw std::runtime_error on I/O failure.
void export_samples(std::string_view scenario, const std::vector<DelaySample>& samples, const std::string& path);
[[nodiscard]] SampleSet import_samples(const std::string& path);

}  // namespace hometunnel::latbench
