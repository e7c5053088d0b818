#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace hometunnel::statkit {

struct HistogramReport {
  std::vector<double> bin_edges;  // size = counts.size() + 1
  std::vector<std::size_t> counts;
  std::vector<double> cumulative_fraction;
};

/// Equal-width bins spanning [min, max]; the last bin is closed on the right.
/// A zero-width range collapses to a single bin.
[[nodiscard]] HistogramReport histogram(std::span<const double> samples, std::size_t bin_count);

/// Nearest-rank percentile: sorted sample at 1-based rank ceil(q * n).
[[nodiscard]] double percentile(std::span<const double> samples, double q);

[[nodiscard]] nlohmann::json to_json(const HistogramReport& report);

// Two-column CSVs for external plotting.
[[nodiscard]] std::string histogram_csv(const HistogramReport& report);
[[nodiscard]] std::string cdf_csv(const HistogramReport& report);

}  // namespace hometunnel::statkit
