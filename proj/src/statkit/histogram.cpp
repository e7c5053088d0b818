#include "hometunnel/statkit/histogram.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <vector>

#include "hometunnel/statkit/descriptive.hpp"

namespace hometunnel::statkit {

namespace {

std::string shortest(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return {buf, res.ptr};
}

}  // namespace

HistogramReport histogram(std::span<const double> samples, std::size_t bin_count) {
  if (samples.empty()) {
    throw StatsError(StatsError::Kind::insufficient_samples, "histogram: empty sample");
  }
  if (bin_count == 0) {
    throw StatsError(StatsError::Kind::invalid_argument, "histogram: bin count must be >= 1");
  }
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *lo_it;
  const double hi = *hi_it;

  HistogramReport report;
  if (hi == lo) {
    report.bin_edges = {lo, hi};
    report.counts = {samples.size()};
    report.cumulative_fraction = {1.0};
    return report;
  }

  const double width = (hi - lo) / static_cast<double>(bin_count);
  report.bin_edges.resize(bin_count + 1);
  for (std::size_t i = 0; i <= bin_count; ++i) {
    report.bin_edges[i] = lo + width * static_cast<double>(i);
  }
  report.bin_edges.back() = hi;
  report.counts.assign(bin_count, 0);

  for (double x : samples) {
    auto bin = static_cast<std::size_t>(std::floor((x - lo) / width));
    bin = std::min(bin, bin_count - 1);
    // Floating-point guard: keep [edge_i, edge_i+1) exact against the stored edges.
    while (bin > 0 && x < report.bin_edges[bin]) --bin;
    while (bin + 1 < bin_count && x >= report.bin_edges[bin + 1]) ++bin;
    ++report.counts[bin];
  }

  report.cumulative_fraction.resize(bin_count);
  std::size_t running = 0;
  const auto n = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < bin_count; ++i) {
    running += report.counts[i];
    report.cumulative_fraction[i] = static_cast<double>(running) / n;
  }
  report.cumulative_fraction.back() = 1.0;
  return report;
}

double percentile(std::span<const double> samples, double q) {
  if (samples.empty()) {
    throw StatsError(StatsError::Kind::insufficient_samples, "percentile: empty sample");
  }
  if (!(q > 0.0 && q <= 1.0)) {
    throw StatsError(StatsError::Kind::invalid_argument, "percentile: q must lie in (0, 1]");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  // 1e-9 absorbs representation error in q (0.97 * 100 must give rank 97).
  auto rank = static_cast<std::size_t>(std::ceil(q * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

nlohmann::json to_json(const HistogramReport& report) {
  return {{"bin_edges", report.bin_edges},
          {"counts", report.counts},
          {"cumulative_fraction", report.cumulative_fraction}};
}

std::string histogram_csv(const HistogramReport& report) {
  std::string out = "bin_upper_ms,count\n";
  for (std::size_t i = 0; i < report.counts.size(); ++i) {
    out += shortest(report.bin_edges[i + 1]) + ',' + std::to_string(report.counts[i]) + '\n';
  }
  return out;
}

std::string cdf_csv(const HistogramReport& report) {
  std::string out = "bin_upper_ms,cumulative_fraction\n";
  for (std::size_t i = 0; i < report.counts.size(); ++i) {
    out += shortest(report.bin_edges[i + 1]) + ',' + shortest(report.cumulative_fraction[i]) + '\n';
  }
  return out;
}

}  // namespace hometunnel::statkit
