#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "hometunnel/simnet/link.hpp"
#include "hometunnel/simnet/queue.hpp"
#include "hometunnel/statkit/published.hpp"

using namespace hometunnel::simnet;

namespace {

struct Moments {
  double min, mean, sd;
};

Moments draw(const LinkModel& m, std::uint64_t seed, int n) {
  DelayStream s(seed);
  std::vector<double> x(n);
  for (auto& v : x) v = sample_delay(m, s).count();
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return {*std::min_element(x.begin(), x.end()), mean, std::sqrt(ss / (n - 1))};
}

Topology two_nodes(LinkModel m, bool ordered = false) {
  Topology t("test");
  t.connect(Node::client, Node::router, {std::move(m)}, ordered);
  return t;
}

}  // namespace

TEST_CASE("method-of-moments fit of the LAN column") {
  const auto m = fit_link_model(Millis{28.33}, Millis{72.92}, Millis{17.22});
  const double excess = 72.92 - 28.33;
  const double s2 = std::log1p((17.22 / excess) * (17.22 / excess));
  CHECK(m.sigma_log == doctest::Approx(std::sqrt(s2)).epsilon(1e-12));
  CHECK(m.mu_log == doctest::Approx(std::log(excess) - s2 / 2).epsilon(1e-12));
  CHECK(m.mu_log == doctest::Approx(3.728003).epsilon(1e-6));
  CHECK(m.sigma_log == doctest::Approx(0.372844).epsilon(1e-6));
  CHECK(m.min_delay.count() == 28.33);
  CHECK(m.mean().count() == doctest::Approx(72.92).epsilon(1e-12));
  CHECK(m.standard_deviation().count() == doctest::Approx(17.22).epsilon(1e-12));

  const auto mc = draw(m, 1, 100'000);
  CHECK(mc.min >= 28.33);
  CHECK(std::fabs(mc.mean / 72.92 - 1) <= 0.02);
  CHECK(std::fabs(mc.sd / 17.22 - 1) <= 0.05);
}

// Relative standard error of the sample sd of the fitted law at n draws:
// sqrt((excess kurtosis + 2) / 4n), with the lognormal's closed-form kurtosis.
double sd_relative_error(const LinkModel& m, int n) {
  const double w = std::exp(m.sigma_log * m.sigma_log);
  const double kurt = w * w * w * w + 2 * w * w * w + 3 * w * w - 6;
  return std::sqrt((kurt + 2) / (4.0 * n));
}

constexpr int kDraws = 100'000;

void check_column_moments(bool resolvable) {
  std::uint64_t seed = 100;
  for (const auto& c : hometunnel::statkit::published_columns()) {
    ++seed;
    const auto& s = c.summary;
    const auto m = fit_link_model(Millis{s.minimum}, Millis{s.mean}, Millis{s.standard_deviation});
    if ((3 * sd_relative_error(m, kDraws) <= 0.05) != resolvable) continue;
    const auto mc = draw(m, seed, kDraws);
    INFO(c.network << " " << c.column << " mean " << mc.mean << " sd " << mc.sd);
    CHECK(mc.min >= s.minimum);
    CHECK(std::fabs(mc.mean / s.mean - 1) <= 0.02);
    CHECK(std::fabs(mc.sd / s.standard_deviation - 1) <= 0.05);
  }
}

TEST_CASE("fitted published columns reproduce their moments at 10^5 draws") { check_column_moments(true); }

// Heavy-tailed fits: the sample sd itself wanders by more than 5% / 3 at this n,
// so the sd bound is reported but cannot be guaranteed.
TEST_CASE("heavy-tailed published columns at 10^5 draws" * doctest::may_fail()) { check_column_moments(false); }

TEST_CASE("heavy-tailed fits still hit their mean and floor") {
  std::uint64_t seed = 100;
  for (const auto& c : hometunnel::statkit::published_columns()) {
    ++seed;
    const auto& s = c.summary;
    const auto m = fit_link_model(Millis{s.minimum}, Millis{s.mean}, Millis{s.standard_deviation});
    const auto mc = draw(m, seed, kDraws);
    INFO(c.network << " " << c.column);
    CHECK(mc.min >= s.minimum);
    CHECK(std::fabs(mc.mean / s.mean - 1) <= 0.02);
  }
}

TEST_CASE("fit edge cases") {
  const auto tight = fit_link_model(Millis{0}, Millis{40}, Millis{1e-9});
  const auto mc = draw(tight, 3, 1000);
  CHECK(mc.mean == doctest::Approx(40).epsilon(1e-9));
  CHECK(mc.sd < 1e-6);
  const auto flat = fit_link_model(Millis{5}, Millis{9}, Millis{0});
  CHECK(flat.sigma_log == 0.0);
  DelayStream s(1);
  for (int i = 0; i < 10; ++i) CHECK(sample_delay(flat, s).count() == doctest::Approx(5 + std::exp(flat.mu_log)));
  CHECK_THROWS_AS((void)fit_link_model(Millis{10}, Millis{5}, Millis{1}), std::invalid_argument);
  CHECK_THROWS_AS((void)fit_link_model(Millis{10}, Millis{10}, Millis{1}), std::invalid_argument);
  CHECK_THROWS_AS((void)fit_link_model(Millis{1}, Millis{10}, Millis{-1}), std::invalid_argument);
}

TEST_CASE("link validation") {
  LinkModel m{"x", Millis{1}, 0, 0.5, 0};
  CHECK_NOTHROW(m.validate());
  m.loss_rate = 1.0;
  CHECK_NOTHROW(m.validate());
  m.loss_rate = 1.5;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  m.loss_rate = -0.1;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  m.loss_rate = 0;
  m.sigma_log = -1;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  m.sigma_log = 0;
  m.min_delay = Millis{-1};
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  m.min_delay = Millis{NAN};
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
}

TEST_CASE("one-way legs sum to the round-trip law") {
  const auto rtt = fit_link_model(Millis{8}, Millis{10}, Millis{2});
  const auto leg = one_way(rtt);
  CHECK(leg.min_delay.count() == doctest::Approx(4));
  CHECK(leg.mean().count() == doctest::Approx(5));
  CHECK(leg.standard_deviation().count() == doctest::Approx(1));
  CHECK(leg.sigma_log == rtt.sigma_log);
}

TEST_CASE("sampling is deterministic per seed and substreams are independent of each other") {
  const auto m = fit_link_model(Millis{1}, Millis{3}, Millis{2});
  DelayStream a(77), b(77), c(78);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = sample_delay(m, a);
    CHECK(x == sample_delay(m, b));
    differs |= x != sample_delay(m, c);
  }
  CHECK(differs);
  CHECK(substream_seed(1, "a") == substream_seed(1, "a"));
  CHECK(substream_seed(1, "a") != substream_seed(1, "b"));
  CHECK(substream_seed(1, "a") != substream_seed(2, "a"));
}

TEST_CASE("loss") {
  auto lossless = fit_link_model(Millis{1}, Millis{2}, Millis{1});
  EventQueue q0(two_nodes(lossless), 1);
  for (int i = 0; i < 1000; ++i) CHECK(q0.send(Node::client, Node::router, {}));
  CHECK(q0.drops().empty());

  const double eps = 0.05;
  auto lossy = lossless;
  lossy.loss_rate = 1 - eps;
  EventQueue q(two_nodes(lossy), 2);
  int dropped = 0;
  for (int i = 0; i < 1000; ++i) dropped += q.send(Node::client, Node::router, {}) ? 0 : 1;
  CHECK(static_cast<std::size_t>(dropped) == q.drops().size());
  // Binomial(1000, 0.95): sd ~ 6.9.
  CHECK(std::abs(dropped - 950) <= 28);

  auto severed = lossless;
  severed.loss_rate = 1;
  EventQueue qs(two_nodes(severed), 3);
  for (int i = 0; i < 100; ++i) CHECK_FALSE(qs.send(Node::client, Node::router, {}));
  CHECK(qs.empty());
}

TEST_CASE("deliveries respect the minimum and time never runs backwards") {
  const auto m = fit_link_model(Millis{3}, Millis{5}, Millis{4});
  EventQueue q(two_nodes(one_way(m)), 9);
  for (int round = 0; round < 50; ++round) {
    for (int i = 0; i < 20; ++i) {
      const auto at = q.send(i % 2 ? Node::client : Node::router, i % 2 ? Node::router : Node::client, {});
      REQUIRE(at);
      CHECK(*at >= q.now() + Millis{1.5});
    }
    Millis last = q.now();
    for (int i = 0; i < 10; ++i) {
      auto e = q.step();
      REQUIRE(e);
      CHECK(e->time >= last);
      last = e->time;
    }
  }
}

TEST_CASE("step ordering and ties") {
  EventQueue q(two_nodes(fit_link_model(Millis{1}, Millis{2}, Millis{1})), 1);
  CHECK_FALSE(q.step());
  q.schedule_timer(Millis{5}, Node::client, 1);
  q.schedule_timer(Millis{3}, Node::client, 2);
  for (std::uint64_t id = 10; id < 20; ++id) q.schedule_timer(Millis{4}, Node::hub, id);
  CHECK(q.size() == 12);
  CHECK(q.step()->timer_id == 2);
  CHECK(q.now() == Millis{3});
  for (std::uint64_t id = 10; id < 20; ++id) CHECK(q.step()->timer_id == id);
  CHECK(q.step()->timer_id == 1);
  CHECK(q.empty());
  q.schedule_timer(Millis{1}, Node::client, 3);
  CHECK(q.step()->time == Millis{5});
}

TEST_CASE("paired flows reuse the request draw for the reply") {
  const auto m = fit_link_model(Millis{2}, Millis{6}, Millis{3});
  EventQueue q(two_nodes(one_way(m)), 4);
  for (std::uint64_t flow = 1; flow <= 50; ++flow) {
    const auto start = q.now();
    const auto out = *q.send(Node::client, Node::router, {}, flow);
    (void)q.step();
    const auto back = *q.send(Node::router, Node::client, {}, flow);
    (void)q.step();
    CHECK((back - out).count() == doctest::Approx((out - start).count()));
  }
  // Unpaired sends draw afresh.
  const auto a = *q.send(Node::client, Node::router, {}) - q.now();
  const auto b = *q.send(Node::client, Node::router, {}) - q.now();
  CHECK(a != b);
}

TEST_CASE("paired round trips follow the round-trip law") {
  const auto rtt = fit_link_model(Millis{8}, Millis{10}, Millis{2});
  EventQueue q(two_nodes(one_way(rtt)), 5);
  std::vector<double> x;
  for (std::uint64_t flow = 1; flow <= 20000; ++flow) {
    const auto start = q.now();
    (void)q.send(Node::client, Node::router, {}, flow);
    (void)q.step();
    (void)q.send(Node::router, Node::client, {}, flow);
    x.push_back((q.step()->time - start).count());
  }
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  double ss = 0;
  for (double v : x) ss += (v - mean) * (v - mean);
  CHECK(mean == doctest::Approx(10).epsilon(0.02));
  CHECK(std::sqrt(ss / (x.size() - 1)) == doctest::Approx(2).epsilon(0.05));
  CHECK(*std::min_element(x.begin(), x.end()) >= 8);
}

TEST_CASE("ordered links keep send order") {
  const auto m = fit_link_model(Millis{1}, Millis{20}, Millis{30});
  EventQueue q(two_nodes(m, true), 6);
  for (std::uint8_t i = 0; i < 200; ++i) (void)q.send(Node::client, Node::router, {i});
  std::uint8_t expect = 0;
  while (auto e = q.step()) CHECK(e->payload[0] == expect++);

  EventQueue loose(two_nodes(m, false), 6);
  for (std::uint8_t i = 0; i < 200; ++i) (void)loose.send(Node::client, Node::router, {i});
  bool reordered = false;
  std::uint8_t prev = 0;
  while (auto e = loose.step()) {
    reordered |= e->payload[0] < prev;
    prev = e->payload[0];
  }
  CHECK(reordered);
}

TEST_CASE("multi-segment chains add their legs") {
  Topology t("chain");
  const LinkModel a{"a", Millis{2}, std::log(1.0), 0, 0};
  const LinkModel b{"b", Millis{5}, std::log(3.0), 0, 0};
  t.connect(Node::client, Node::cloud, {a, b});
  EventQueue q(t, 1);
  CHECK(q.send(Node::cloud, Node::client, {})->count() == doctest::Approx(11));
}

TEST_CASE("topology errors and json") {
  Topology t("x");
  const auto m = fit_link_model(Millis{1}, Millis{2}, Millis{1}, "seg");
  CHECK_THROWS_AS(t.connect(Node::hub, Node::hub, {m}), std::invalid_argument);
  CHECK_THROWS_AS(t.connect(Node::hub, Node::router, {}), std::invalid_argument);
  t.connect(Node::hub, Node::router, {m}, true);
  CHECK(t.connected(Node::router, Node::hub));
  CHECK_FALSE(t.connected(Node::router, Node::cloud));
  EventQueue q(t, 1);
  CHECK_THROWS_AS((void)q.send(Node::client, Node::hub, {}), std::invalid_argument);

  const auto doc = to_json(t);
  const auto back = topology_from_json(nlohmann::json::parse(doc.dump()));
  CHECK(back.scenario() == "x");
  REQUIRE(back.find(Node::hub, Node::router));
  CHECK(back.find(Node::hub, Node::router)->ordered);
  CHECK(back.find(Node::hub, Node::router)->segments[0].sigma_log == doctest::Approx(m.sigma_log));

  const auto fitted = link_from_json({{"name", "l"}, {"min", 28.33}, {"mean", 72.92}, {"sd", 17.22}});
  CHECK(fitted.mu_log == doctest::Approx(3.728003).epsilon(1e-6));
  const auto raw = link_from_json({{"name", "r"}, {"min", 1}, {"mu_log", 0.5}, {"sigma_log", 0.25}, {"loss", 0.1}});
  CHECK(raw.mu_log == 0.5);
  CHECK(raw.loss_rate == 0.1);
  CHECK(link_from_json(to_json(raw)) == raw);
  CHECK_THROWS((void)link_from_json({{"name", "bad"}, {"min", 1}}));
  CHECK_THROWS_AS((void)parse_node("moon"), std::invalid_argument);
}

TEST_CASE("runs are reproducible") {
  auto run = [](std::uint64_t seed) {
    const auto m = fit_link_model(Millis{1}, Millis{5}, Millis{6});
    m.validate();
    auto lossy = m;
    lossy.loss_rate = 0.1;
    Topology t("r");
    t.connect(Node::client, Node::router, {m, lossy});
    EventQueue q(t, seed);
    std::vector<double> out;
    for (int i = 0; i < 500; ++i) {
      auto at = q.send(Node::client, Node::router, {}, i % 3);
      out.push_back(at ? at->count() : -1);
      if (i % 5 == 0) (void)q.step();
    }
    return out;
  };
  CHECK(run(11) == run(11));
  CHECK(run(11) != run(12));
}
