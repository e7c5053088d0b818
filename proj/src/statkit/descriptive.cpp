#include "hometunnel/statkit/descriptive.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <utility>
#include <vector>

#include "hometunnel/statkit/student_t.hpp"

namespace hometunnel::statkit {

namespace {

double median_of(std::vector<double> sorted) {
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  if (n % 2 == 1) return sorted[n / 2];
  return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

// Row labels, in report order.
constexpr std::pair<const char*, double StatsSummary::*> kRows[] = {
    {"Mean", &StatsSummary::mean},
    {"Standard Error", &StatsSummary::standard_error},
    {"Median", &StatsSummary::median},
    {"Standard Deviation", &StatsSummary::standard_deviation},
    {"Simple Variance", &StatsSummary::sample_variance},
    {"Kurtosis", &StatsSummary::kurtosis},
    {"Skewness", &StatsSummary::skewness},
    {"Range", &StatsSummary::range},
    {"Minimum", &StatsSummary::minimum},
    {"Maximum", &StatsSummary::maximum},
    {"Confidence Level (95%)", &StatsSummary::confidence_level_95},
};

}  // namespace

StatsSummary describe(std::span<const double> samples) {
  const std::size_t count = samples.size();
  if (count < 4) {
    throw StatsError(StatsError::Kind::insufficient_samples,
                     "describe: need at least 4 samples, got " + std::to_string(count));
  }
  const auto n = static_cast<double>(count);

  double sum = 0;
  for (double x : samples) sum += x;
  const double mean = sum / n;

  double ss = 0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double variance = ss / (n - 1);
  const double sd = std::sqrt(variance);
  if (!(sd > 0)) {
    throw StatsError(StatsError::Kind::degenerate_sample, "describe: degenerate sample (zero spread)");
  }

  double z3 = 0;
  double z4 = 0;
  for (double x : samples) {
    const double z = (x - mean) / sd;
    z3 += z * z * z;
    z4 += z * z * z * z;
  }

  StatsSummary s;
  s.count = count;
  s.mean = mean;
  s.standard_deviation = sd;
  s.sample_variance = variance;
  s.standard_error = sd / std::sqrt(n);
  s.skewness = n / ((n - 1) * (n - 2)) * z3;
  s.kurtosis = n * (n + 1) / ((n - 1) * (n - 2) * (n - 3)) * z4 -
               3 * (n - 1) * (n - 1) / ((n - 2) * (n - 3));
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  s.minimum = *lo;
  s.maximum = *hi;
  s.range = s.maximum - s.minimum;
  s.median = median_of({samples.begin(), samples.end()});
  s.confidence_level_95 = t_quantile(0.975, static_cast<long>(count) - 1) * s.standard_error;
  return s;
}

nlohmann::json to_json(const StatsSummary& summary) {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [label, field] : kRows) doc[label] = summary.*field;
  doc["Count"] = summary.count;
  return doc;
}

StatsSummary summary_from_json(const nlohmann::json& doc) {
  StatsSummary s;
  for (const auto& [label, field] : kRows) s.*field = doc.at(label).get<double>();
  s.count = doc.value("Count", std::size_t{0});
  return s;
}

std::string render_table(const StatsSummary& summary, int precision) {
  std::ostringstream out;
  out << std::left << std::setw(24) << "Delay (ms)" << '\n';
  out << std::fixed << std::setprecision(precision);
  for (const auto& [label, field] : kRows) {
    out << std::left << std::setw(24) << label << summary.*field << '\n';
  }
  out << std::left << std::setw(24) << "Count" << summary.count << '\n';
  return out.str();
}

}  // namespace hometunnel::statkit
