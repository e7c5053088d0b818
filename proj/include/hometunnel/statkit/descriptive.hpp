#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace hometunnel::statkit {

class StatsError : public std::runtime_error {
public:
  enum class Kind { invalid_argument, insufficient_samples, degenerate_sample };

  StatsError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  [[nodiscard]] Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

/// Descriptive statistics of a delay sample, laid out like a spreadsheet
/// "Descriptive Statistics" report. All delay-valued fields are in ms.
struct StatsSummary {
  double mean = 0;
  double standard_error = 0;
  double median = 0;
  double standard_deviation = 0;  // sample (n-1)
  double sample_variance = 0;
  double kurtosis = 0;  // excess, bias-corrected
  double skewness = 0;  // bias-corrected
  double range = 0;
  double minimum = 0;
  double maximum = 0;
  double confidence_level_95 = 0;  // half-width t(0.975, n-1) * s / sqrt(n)
  std::size_t count = 0;

  friend bool operator==(const StatsSummary&, const StatsSummary&) = default;
};

/// Bias-corrected moments; needs at least four samples and a non-zero spread.
[[nodiscard]] StatsSummary describe(std::span<const double> samples);

[[nodiscard]] nlohmann::json to_json(const StatsSummary& summary);
[[nodiscard]] StatsSummary summary_from_json(const nlohmann::json& doc);

/// Two-column text table with the report row labels ("Mean", ..., "Count").
[[nodiscard]] std::string render_table(const StatsSummary& summary, int precision = 2);

}  // namespace hometunnel::statkit
