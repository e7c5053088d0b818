#include "hometunnel/statkit/published.hpp"

#include <cmath>

#include "hometunnel/statkit/student_t.hpp"

namespace hometunnel::statkit {

namespace {

StatsSummary column(double mean, double se, double median, double sd, double variance, double kurtosis,
                    double skewness, double range, double minimum, double maximum, double ci) {
  StatsSummary s;
  s.mean = mean;
  s.standard_error = se;
  s.median = median;
  s.standard_deviation = sd;
  s.sample_variance = variance;
  s.kurtosis = kurtosis;
  s.skewness = skewness;
  s.range = range;
  s.minimum = minimum;
  s.maximum = maximum;
  s.confidence_level_95 = ci;
  return s;
}

RelationCheck relation(std::string name, double published, double predicted, double tolerance) {
  RelationCheck r{std::move(name), published, predicted, 0, false};
  r.relative_error = std::abs(predicted - published) / std::abs(published);
  r.pass = r.relative_error <= tolerance;
  return r;
}

}  // namespace

const std::vector<PublishedColumn>& published_columns() {
  // Row order: mean, SE, median, SD, variance, kurtosis, skewness, range, min, max, CI(95%).
  static const std::vector<PublishedColumn> columns = {
      // Local REST control on the home LAN.
      {"home-lan", "LAN",
       column(72.92, 0.54, 70.67, 17.22, 296.60, 153.77, 9.72, 373.78, 28.33, 402.12, 1.07)},
      // Cloud control from the guest WiFi.
      {"guest-wifi", "Cloud",
       column(557.05, 2.52, 541.84, 79.90, 6383.28, 42.27, 5.61, 942.02, 447.13, 1389.15, 4.94)},
      // Remote over 4G.
      {"4g", "WG-HTTP",
       column(369.17, 3.40, 354.10, 107.63, 11585.27, 215.59, 12.66, 2303.85, 309.79, 2613.64, 6.67)},
      {"4g", "WG-HTTPS",
       column(948.51, 2.80, 945.31, 80.38, 6460.59, 62.92, 5.59, 1226.46, 788.98, 2015.44, 5.49)},
      {"4g", "Cloud",
       column(938.51, 22.78, 840.12, 795.82, 633323.88, 82.94, 9.15, 7721.95, 723.11, 8445.06, 44.70)},
      // Remote from an office network.
      {"office", "WG-HTTP",
       column(158.84, 2.57, 150.27, 81.69, 6672.97, 147.61, 11.96, 1121.89, 117.34, 1239.23, 5.05)},
      {"office", "WG-HTTPS",
       column(472.27, 1.88, 462.75, 63.5, 4032.26, 179.69, 11.84, 1120.6, 413.68, 1534.27, 3.69)},
      {"office", "Cloud",
       column(465.81, 10.1, 432.5, 322.11, 103756.77, 226.85, 14.81, 5128.89, 362.03, 5490.92, 19.81)},
      // Remote from public WiFi.
      {"public-wifi", "WG-HTTP",
       column(145.18, 3.66, 136.96, 118.23, 13977.88, 573.91, 22.28, 3195.42, 113.85, 3309.27, 7.18)},
      {"public-wifi", "WG-HTTPS",
       column(475.68, 6.32, 464.48, 200.69, 40278.38, 970.92, 30.88, 6369.98, 410.47, 6780.45, 12.41)},
      {"public-wifi", "Cloud",
       column(477.24, 2.97, 455.26, 94.46, 8922.14, 54.81, 6.39, 1167.12, 389.07, 1556.19, 5.83)},
  };
  return columns;
}

bool ConsistencyReport::pass() const {
  if (refused) return false;
  for (const auto& r : relations) {
    if (!r.pass) return false;
  }
  return true;
}

ConsistencyReport consistency_check(const StatsSummary& published, double tolerance, std::string label) {
  ConsistencyReport report;
  report.label = std::move(label);
  const double ratio = published.standard_deviation / published.standard_error;
  report.implied_n = ratio * ratio;

  const long n = std::lround(report.implied_n);
  if (n < 2) {
    report.refused = "implied n = " + std::to_string(n) + " leaves no degrees of freedom";
    return report;
  }
  const double predicted_ci = t_quantile(0.975, n - 1) * published.standard_error;
  report.relations.push_back(
      relation("confidence_level_95", published.confidence_level_95, predicted_ci, tolerance));
  report.relations.push_back(
      relation("range", published.range, published.maximum - published.minimum, tolerance));
  report.relations.push_back(relation("sample_variance", published.sample_variance,
                                      published.standard_deviation * published.standard_deviation,
                                      tolerance));
  return report;
}

}  // namespace hometunnel::statkit
