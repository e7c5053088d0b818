#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "hometunnel/statkit/descriptive.hpp"
#include "hometunnel/statkit/histogram.hpp"
#include "hometunnel/statkit/published.hpp"
#include "hometunnel/statkit/student_t.hpp"
#include "oracles/ref_stats.hpp"
#include "oracles/ref_t.hpp"

using namespace hometunnel::statkit;

namespace {

std::vector<double> skewed_sample(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::lognormal_distribution<double> d(3.0, 0.6);
  std::vector<double> x(n);
  for (auto& v : x) v = 20 + d(rng);
  return x;
}

void check_against_reference(const std::vector<double>& x) {
  const auto s = describe(x);
  const auto r = ref::brute_describe(x);
  const double tol = 1e-9;
  CHECK(s.mean == doctest::Approx(static_cast<double>(r.mean)).epsilon(tol));
  CHECK(s.median == doctest::Approx(static_cast<double>(r.median)).epsilon(tol));
  CHECK(s.standard_deviation == doctest::Approx(static_cast<double>(r.sd)).epsilon(tol));
  CHECK(s.standard_error == doctest::Approx(static_cast<double>(r.se)).epsilon(tol));
  CHECK(s.sample_variance == doctest::Approx(static_cast<double>(r.var)).epsilon(tol));
  CHECK(s.skewness == doctest::Approx(static_cast<double>(r.skew)).epsilon(1e-7));
  CHECK(s.kurtosis == doctest::Approx(static_cast<double>(r.kurt)).epsilon(1e-7));
  CHECK(s.range == doctest::Approx(static_cast<double>(r.range)));
  CHECK(s.count == x.size());
}

}  // namespace

TEST_CASE("describe of one to five") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const auto s = describe(x);
  CHECK(s.mean == doctest::Approx(3.0));
  CHECK(s.median == doctest::Approx(3.0));
  CHECK(s.standard_deviation == doctest::Approx(1.5811388300841898).epsilon(1e-12));
  CHECK(s.standard_error == doctest::Approx(0.7071067811865476).epsilon(1e-12));
  CHECK(s.sample_variance == doctest::Approx(2.5));
  CHECK(std::fabs(s.skewness) < 1e-12);
  CHECK(s.kurtosis == doctest::Approx(-1.2).epsilon(1e-12));
  CHECK(s.range == doctest::Approx(4.0));
  CHECK(s.minimum == 1.0);
  CHECK(s.maximum == 5.0);
  CHECK(s.confidence_level_95 == doctest::Approx(2.7764451051977987 * 0.7071067811865476).epsilon(1e-7));
  CHECK(s.count == 5);
  check_against_reference(x);
}

TEST_CASE("describe agrees with the brute-force reference on skewed samples") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) check_against_reference(skewed_sample(seed, 4 + seed * 37));
  check_against_reference({2, 9, 4, 4, 7, 1});
}

TEST_CASE("describe errors") {
  CHECK_THROWS_AS((void)describe(std::vector<double>{5, 5, 5, 5}), StatsError);
  try {
    (void)describe(std::vector<double>{5, 5, 5, 5});
  } catch (const StatsError& e) {
    CHECK(e.kind() == StatsError::Kind::degenerate_sample);
  }
  try {
    (void)describe(std::vector<double>{1, 2, 3});
    FAIL("expected an error");
  } catch (const StatsError& e) {
    CHECK(e.kind() == StatsError::Kind::insufficient_samples);
  }
}

TEST_CASE("standard error and confidence level for n = 1005, sd 79.90") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> d(0, 1);
  std::vector<double> x(1005);
  for (auto& v : x) v = d(rng);
  const auto s0 = describe(x);
  for (auto& v : x) v = 557.05 + (v - s0.mean) * (79.90 / s0.standard_deviation);
  const auto s = describe(x);
  CHECK(s.standard_deviation == doctest::Approx(79.90).epsilon(1e-12));
  CHECK(std::round(s.standard_error * 100) / 100 == doctest::Approx(2.52));
  // Published 4.94 came from the unrounded study data; n = 1005 gives 4.946.
  CHECK(s.confidence_level_95 == doctest::Approx(4.94).epsilon(0.002));
}

TEST_CASE("describe is permutation invariant, translation and scale covariant") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    auto x = skewed_sample(100 + trial, 50 + trial);
    const auto base = describe(x);

    auto shuffled = x;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto p = describe(shuffled);
    CHECK(p.mean == doctest::Approx(base.mean).epsilon(1e-12));
    CHECK(p.median == base.median);
    CHECK(p.skewness == doctest::Approx(base.skewness).epsilon(1e-9));
    CHECK(p.kurtosis == doctest::Approx(base.kurtosis).epsilon(1e-9));

    const double c = 1000.0 * trial - 7.5;
    auto shifted = x;
    for (auto& v : shifted) v += c;
    const auto t = describe(shifted);
    CHECK(t.mean == doctest::Approx(base.mean + c).epsilon(1e-12));
    CHECK(t.median == doctest::Approx(base.median + c).epsilon(1e-12));
    CHECK(t.minimum == doctest::Approx(base.minimum + c).epsilon(1e-12));
    CHECK(t.maximum == doctest::Approx(base.maximum + c).epsilon(1e-12));
    CHECK(t.standard_deviation == doctest::Approx(base.standard_deviation).epsilon(1e-7));
    CHECK(t.skewness == doctest::Approx(base.skewness).epsilon(1e-6));
    CHECK(t.kurtosis == doctest::Approx(base.kurtosis).epsilon(1e-6));
    CHECK(t.confidence_level_95 == doctest::Approx(base.confidence_level_95).epsilon(1e-7));

    const double k = 0.25 + trial;
    auto scaled = x;
    for (auto& v : scaled) v *= k;
    const auto sc = describe(scaled);
    CHECK(sc.mean == doctest::Approx(base.mean * k).epsilon(1e-12));
    CHECK(sc.median == doctest::Approx(base.median * k).epsilon(1e-12));
    CHECK(sc.standard_deviation == doctest::Approx(base.standard_deviation * k).epsilon(1e-10));
    CHECK(sc.standard_error == doctest::Approx(base.standard_error * k).epsilon(1e-10));
    CHECK(sc.confidence_level_95 == doctest::Approx(base.confidence_level_95 * k).epsilon(1e-10));
    CHECK(sc.range == doctest::Approx(base.range * k).epsilon(1e-10));
    CHECK(sc.skewness == doctest::Approx(base.skewness).epsilon(1e-9));
    CHECK(sc.kurtosis == doctest::Approx(base.kurtosis).epsilon(1e-9));
  }
}

TEST_CASE("summary invariants") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto s = describe(skewed_sample(seed, 10 + seed));
    CHECK(s.range == doctest::Approx(s.maximum - s.minimum));
    CHECK(s.sample_variance == doctest::Approx(s.standard_deviation * s.standard_deviation));
    CHECK(s.standard_error == doctest::Approx(s.standard_deviation / std::sqrt(double(s.count))));
    CHECK(s.minimum <= s.median);
    CHECK(s.median <= s.maximum);
  }
}

TEST_CASE("median of an even sample is the midpoint of the central pair") {
  CHECK(describe(std::vector<double>{4, 1, 3, 10}).median == doctest::Approx(3.5));
}

TEST_CASE("summary JSON uses the report row labels and round-trips") {
  const auto s = describe(skewed_sample(3, 200));
  const auto j = to_json(s);
  for (const char* label : {"Mean", "Standard Error", "Median", "Standard Deviation", "Simple Variance", "Kurtosis",
                            "Skewness", "Range", "Minimum", "Maximum", "Confidence Level (95%)", "Count"}) {
    CHECK(j.contains(label));
  }
  CHECK(summary_from_json(nlohmann::json::parse(j.dump())) == s);
  const auto table = render_table(s);
  CHECK(table.find("Confidence Level (95%)") != std::string::npos);
  CHECK(table.find("Simple Variance") != std::string::npos);
}

TEST_CASE("t quantiles match frozen reference values") {
  for (const auto& [df, value] : ref::kT975) CHECK(std::fabs(t_quantile(0.975, df) - value) <= 1e-6);
  CHECK(std::fabs(t_quantile(0.975, 4) - 2.776445) < 1e-6);
  CHECK(std::fabs(t_quantile(0.975, 1004) - 1.9623) < 1e-4);
}

TEST_CASE("t quantile symmetry and monotonicity") {
  for (long df : {1L, 2L, 7L, 50L, 1000L}) {
    CHECK(t_quantile(0.5, df) == 0.0);
    CHECK(t_quantile(0.1, df) == doctest::Approx(-t_quantile(0.9, df)).epsilon(1e-9));
    double prev = -INFINITY;
    for (double p = 0.01; p < 1.0; p += 0.049) {
      const double q = t_quantile(p, df);
      CHECK(q > prev);
      prev = q;
    }
  }
  double prev = INFINITY;
  for (long df = 1; df <= 5000; df = df * 2 + 1) {
    const double q = t_quantile(0.975, df);
    CHECK(q < prev);
    CHECK(q > 1.959963984540054);
    prev = q;
  }
}

TEST_CASE("t cdf agrees with numerical integration of the density") {
  for (double df : {1.0, 3.0, 12.0, 120.0}) {
    for (double t : {-3.0, -0.7, 0.0, 0.4, 1.5, 2.5, 6.0}) {
      CHECK(t_cdf(t, df) == doctest::Approx(ref::t_cdf_simpson(t, df)).epsilon(1e-8));
    }
  }
}

TEST_CASE("t quantile rejects invalid arguments") {
  CHECK_THROWS_AS((void)t_quantile(0.0, 5), StatsError);
  CHECK_THROWS_AS((void)t_quantile(1.0, 5), StatsError);
  CHECK_THROWS_AS((void)t_quantile(0.9, 0), StatsError);
}

TEST_CASE("histogram of a hand-countable sample") {
  const auto h = histogram(std::vector<double>{1, 2, 3, 10}, 3);
  REQUIRE(h.bin_edges.size() == 4);
  CHECK(h.bin_edges[0] == 1.0);
  CHECK(h.bin_edges[1] == 4.0);
  CHECK(h.bin_edges[2] == 7.0);
  CHECK(h.bin_edges[3] == 10.0);
  CHECK(h.counts == std::vector<std::size_t>{3, 0, 1});
  CHECK(h.cumulative_fraction == std::vector<double>{0.75, 0.75, 1.0});

  const auto single = histogram(std::vector<double>{7}, 5);
  CHECK(single.counts == std::vector<std::size_t>{1});
  CHECK(single.cumulative_fraction == std::vector<double>{1.0});

  CHECK_THROWS_AS((void)histogram(std::vector<double>{}, 3), StatsError);
  CHECK_THROWS_AS((void)histogram(std::vector<double>{1, 2}, 0), StatsError);
}

TEST_CASE("histogram counts sum to n and the cumulative ends at exactly one") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto x = skewed_sample(seed, 3 + seed * 11);
    const auto h = histogram(x, 1 + seed % 17);
    CHECK(std::accumulate(h.counts.begin(), h.counts.end(), std::size_t{0}) == x.size());
    CHECK(h.cumulative_fraction.back() == 1.0);
    CHECK(std::is_sorted(h.cumulative_fraction.begin(), h.cumulative_fraction.end()));
    std::size_t running = 0;
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
      running += h.counts[i];
      CHECK(h.cumulative_fraction[i] == doctest::Approx(double(running) / x.size()));
    }
  }
}

TEST_CASE("histogram and cumulative CSV exports") {
  const auto h = histogram(std::vector<double>{1, 2, 3, 10}, 3);
  CHECK(histogram_csv(h) == "bin_upper_ms,count\n4,3\n7,0\n10,1\n");
  CHECK(cdf_csv(h) == "bin_upper_ms,cumulative_fraction\n4,0.75\n7,0.75\n10,1\n");
}

TEST_CASE("nearest-rank percentile") {
  std::vector<double> x(100);
  std::iota(x.begin(), x.end(), 1.0);
  std::shuffle(x.begin(), x.end(), std::mt19937_64(1));
  CHECK(percentile(x, 0.97) == 97.0);
  CHECK(percentile(x, 1.0) == 100.0);
  CHECK(percentile(x, 0.001) == 1.0);
  CHECK(percentile(std::vector<double>{7}, 0.5) == 7.0);
  CHECK(percentile(std::vector<double>{1, 2, 3, 4, 5}, 0.6) == 3.0);
  CHECK_THROWS_AS((void)percentile(std::vector<double>{}, 0.5), StatsError);
  CHECK_THROWS_AS((void)percentile(x, 0.0), StatsError);
  CHECK_THROWS_AS((void)percentile(x, 1.5), StatsError);
}

TEST_CASE("published columns are internally consistent at two percent") {
  const auto& cols = published_columns();
  REQUIRE(cols.size() == 11);
  for (const auto& c : cols) {
    const auto r = consistency_check(c.summary, 0.02, c.network + " " + c.column);
    CHECK_MESSAGE(r.pass(), r.label);
  }
}

TEST_CASE("consistency check examples") {
  const auto& cols = published_columns();
  auto find = [&](const std::string& net, const std::string& col) {
    for (const auto& c : cols) {
      if (c.network == net && c.column == col) return c.summary;
    }
    FAIL("missing column");
    return StatsSummary{};
  };
  const auto guest = consistency_check(find("guest-wifi", "Cloud"), 0.01);
  CHECK(std::round(guest.implied_n) == 1005);
  CHECK(guest.pass());
  for (const auto& rel : guest.relations) {
    if (rel.relation == "confidence_level_95") CHECK(rel.predicted == doctest::Approx(4.945).epsilon(5e-4));
  }

  const auto wg = consistency_check(find("4g", "WG-HTTP"), 0.02);
  CHECK(std::round(wg.implied_n) == 1002);
  for (const auto& rel : wg.relations) {
    if (rel.relation == "confidence_level_95") CHECK(rel.predicted == doctest::Approx(6.672).epsilon(5e-4));
  }

  const auto cloud = consistency_check(find("public-wifi", "Cloud"), 0.02);
  for (const auto& rel : cloud.relations) {
    if (rel.relation == "confidence_level_95") CHECK(rel.predicted == doctest::Approx(1.9623 * 2.97).epsilon(5e-4));
  }

  StatsSummary degenerate;
  degenerate.standard_deviation = 10;
  degenerate.standard_error = 10;
  degenerate.confidence_level_95 = 100;
  const auto refused = consistency_check(degenerate, 0.02);
  CHECK(refused.implied_n == doctest::Approx(1.0));
  CHECK(refused.refused.has_value());
  CHECK_FALSE(refused.pass());

  int failing = 0;
  for (const auto& c : cols) failing += consistency_check(c.summary, 1e-4).pass() ? 0 : 1;
  CHECK(failing > 0);
}
