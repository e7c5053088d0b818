#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hometunnel/hubsim/hub.hpp"
#include "hometunnel/latbench/calibration.hpp"
#include "hometunnel/latbench/matching.hpp"
#include "hometunnel/latbench/runner.hpp"
#include "hometunnel/latbench/sample.hpp"
#include "hometunnel/netplan/ipv6.hpp"
#include "hometunnel/netplan/plan.hpp"
#include "hometunnel/netplan/policy.hpp"
#include "hometunnel/statkit/descriptive.hpp"
#include "hometunnel/statkit/histogram.hpp"
#include "hometunnel/statkit/published.hpp"

namespace {

namespace lb = hometunnel::latbench;
namespace np = hometunnel::netplan;
namespace sk = hometunnel::statkit;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;
constexpr int kNoData = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string strip_ext(const std::string& path) {
  const auto dot = path.rfind('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
  return path.substr(0, dot);
}

std::uint64_t parse_global_id(const std::string& text) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(text, &used, 0);
  } catch (const std::exception&) {
    throw UsageError("bad --ipv6-global-id: " + text);
  }
  if (used != text.size() || text.front() == '-') throw UsageError("bad --ipv6-global-id: " + text);
  if (v > np::kMaxGlobalId) throw UsageError("--ipv6-global-id must be below 2^40");
  return v;
}

std::vector<double> load_ok_delays(const std::string& path) {
  try {
    return lb::ok_delays(lb::import_samples(path).samples);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
}

struct PlanOpts {
  std::string global_id;
  std::string out;
  std::string firewall_out;
};

int cmd_plan(const PlanOpts& o) {
  const auto plan = np::default_plan();
  json doc = np::to_json(plan);
  if (!o.global_id.empty()) doc["ipv6"] = np::to_json(np::derive_ipv6_plan(plan, parse_global_id(o.global_id)));
  const auto text = doc.dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_file(o.out, text);
    const auto fw = o.firewall_out.empty() ? strip_ext(o.out) + ".firewall.txt" : o.firewall_out;
    write_file(fw, np::render_firewall(plan.policy()));
    std::cout << "wrote " << o.out << " and " << fw << "\n";
  }
  return kOk;
}

struct RunOpts {
  std::string scenario;
  std::uint64_t seed = 42;
  int count = 1000;
  std::string config;
  std::string out;
  std::string events_out;
  std::string match_out;
};

int cmd_run(const RunOpts& o, const CLI::App& sub) {
  lb::ScenarioConfig config;
  try {
    if (!o.config.empty()) {
      std::ifstream in(o.config);
      if (!in) throw UsageError("cannot read " + o.config);
      json doc = json::parse(in, nullptr, false);
      if (doc.is_discarded()) throw UsageError("config is not valid JSON: " + o.config);
      if (!o.scenario.empty()) doc["scenario"] = o.scenario;
      config = lb::scenario_from_json(doc);
    } else {
      if (o.scenario.empty()) throw UsageError("--scenario is required without --config");
      config = lb::default_calibration(lb::parse_scenario(o.scenario));
    }
    if (o.config.empty() || sub.count("--seed") > 0) config.seed = o.seed;
    if (o.config.empty() || sub.count("--count") > 0) config.command_count = o.count;
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const auto result = lb::run_scenario(config);
  const std::string name(lb::to_string(config.id));
  const std::string out = o.out.empty() ? name + "-samples.csv" : o.out;
  const std::string events = o.events_out.empty() ? strip_ext(out) + ".events.csv" : o.events_out;
  lb::export_samples(name, result.samples, out);
  hometunnel::hubsim::export_events(result.events, events);
  if (!o.match_out.empty()) {
    const auto report =
        lb::match_events(result.commands, result.events, config.ntp_bound, lb::Millis{5'000});
    write_file(o.match_out, lb::to_json(report, result.events).dump(2) + "\n");
  }

  const auto ok = lb::ok_delays(result.samples);
  std::cout << name << ": " << ok.size() << "/" << result.samples.size() << " ok, wrote " << out << " and "
            << events << "\n";
  return ok.empty() ? kNoData : kOk;
}

struct StatsOpts {
  std::string in;
  bool json_out = false;
  bool table = false;
  int precision = 2;
};

int cmd_stats(const StatsOpts& o) {
  const auto delays = load_ok_delays(o.in);
  sk::StatsSummary s;
  try {
    s = sk::describe(delays);
  } catch (const sk::StatsError& e) {
    throw NoDataError(e.what());
  }
  if (o.json_out) {
    std::cout << sk::to_json(s).dump(2) << "\n";
  } else {
    std::cout << sk::render_table(s, o.precision);
  }
  return kOk;
}

struct ReportOpts {
  std::string in;
  std::size_t bins = 20;
  std::vector<double> percentiles{0.95, 0.97, 0.99};
  std::string hist_out;
  std::string cdf_out;
};

int cmd_report(const ReportOpts& o) {
  const auto delays = load_ok_delays(o.in);
  if (delays.empty()) throw NoDataError("no ok samples in " + o.in);
  if (o.bins < 1) throw UsageError("--bins must be at least 1");
  const auto report = sk::histogram(delays, o.bins);
  const auto stem = strip_ext(o.in);
  const auto hist = o.hist_out.empty() ? stem + ".hist.csv" : o.hist_out;
  const auto cdf = o.cdf_out.empty() ? stem + ".cdf.csv" : o.cdf_out;
  write_file(hist, sk::histogram_csv(report));
  write_file(cdf, sk::cdf_csv(report));
  for (const double q : o.percentiles) {
    if (!(q > 0 && q <= 1)) throw UsageError("percentiles must lie in (0, 1]");
    std::cout << "p" << q * 100 << " " << std::fixed << std::setprecision(2) << sk::percentile(delays, q)
              << " ms\n";
    std::cout.unsetf(std::ios::fixed);
  }
  std::cout << "wrote " << hist << " and " << cdf << "\n";
  return kOk;
}

struct CheckOpts {
  double tolerance = 0.02;
  bool json_out = false;
};

int cmd_check(const CheckOpts& o) {
  if (!(o.tolerance > 0)) throw UsageError("--tolerance must be positive");
  bool all = true;
  json doc = json::array();
  for (const auto& col : sk::published_columns()) {
    const auto label = col.network + " " + col.column;
    const auto r = sk::consistency_check(col.summary, o.tolerance, label);
    all = all && r.pass();
    if (o.json_out) {
      json rel = json::array();
      for (const auto& c : r.relations) {
        rel.push_back({{"relation", c.relation},
                       {"published", c.published},
                       {"predicted", c.predicted},
                       {"relative_error", c.relative_error},
                       {"pass", c.pass}});
      }
      doc.push_back({{"column", label}, {"implied_n", r.implied_n}, {"pass", r.pass()}, {"relations", rel}});
      continue;
    }
    std::cout << (r.pass() ? "PASS " : "FAIL ") << label << "  n~" << std::fixed << std::setprecision(1)
              << r.implied_n;
    if (r.refused) std::cout << "  refused: " << *r.refused;
    for (const auto& c : r.relations) {
      std::cout << "  " << c.relation << " " << std::setprecision(3) << c.published << " vs " << c.predicted;
    }
    std::cout << "\n";
  }
  if (o.json_out) std::cout << doc.dump(2) << "\n";
  return all ? kOk : kFail;
}

int cmd_calibrate(const std::string& scenario) {
  json doc = json::array();
  for (const auto id : lb::kAllScenarios) {
    if (!scenario.empty() && id != lb::parse_scenario(scenario)) continue;
    const auto c = lb::default_calibration(id);
    const auto target = lb::published_target(id);
    auto j = lb::to_json(c);
    j["target"] = {{"min", target.min.count()}, {"mean", target.mean.count()}, {"sd", target.sd.count()}};
    j["floor"] = lb::configured_floor(c).count();
    j["expected_mean"] = lb::expected_mean(c).count();
    doc.push_back(j);
  }
  std::cout << (scenario.empty() ? doc : doc.front()).dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"homelab: segmented home network, tunnel and IoT latency bench"};
  app.require_subcommand(1);

  PlanOpts plan;
  auto* plan_cmd = app.add_subcommand("plan", "Write the subnet plan and firewall rules");
  plan_cmd->add_option("--ipv6-global-id", plan.global_id, "40-bit ULA global id (decimal or 0x hex)");
  plan_cmd->add_option("--out", plan.out, "Plan JSON path (stdout when omitted)");
  plan_cmd->add_option("--firewall-out", plan.firewall_out, "Firewall rule text path");

  RunOpts run;
  auto* run_cmd = app.add_subcommand("run", "Run one control scenario");
  run_cmd->add_option("--scenario", run.scenario, "Scenario id, e.g. wg-http-office");
  run_cmd->add_option("--seed", run.seed, "Run seed")->capture_default_str();
  run_cmd->add_option("--count", run.count, "Commands to issue")->capture_default_str();
  run_cmd->add_option("--config", run.config, "Scenario config JSON");
  run_cmd->add_option("--out", run.out, "Sample CSV path");
  run_cmd->add_option("--events-out", run.events_out, "Light event CSV path");
  run_cmd->add_option("--match-out", run.match_out, "Command/event match report JSON path");

  StatsOpts stats;
  auto* stats_cmd = app.add_subcommand("stats", "Descriptive statistics of a sample CSV");
  stats_cmd->add_option("--in", stats.in, "Sample CSV")->required();
  auto* json_flag = stats_cmd->add_flag("--json", stats.json_out, "JSON output");
  auto* table_flag = stats_cmd->add_flag("--table", stats.table, "Table output (default)");
  json_flag->excludes(table_flag);
  stats_cmd->add_option("--precision", stats.precision, "Decimals in the table")->capture_default_str();

  ReportOpts report;
  auto* report_cmd = app.add_subcommand("report", "Histogram, cumulative distribution and percentiles");
  report_cmd->add_option("--in", report.in, "Sample CSV")->required();
  report_cmd->add_option("--bins", report.bins, "Histogram bins")->capture_default_str();
  report_cmd->add_option("--percentiles", report.percentiles, "Fractions, e.g. 0.95,0.97,0.99")->delimiter(',');
  report_cmd->add_option("--hist-out", report.hist_out, "Histogram CSV path");
  report_cmd->add_option("--cdf-out", report.cdf_out, "Cumulative CSV path");

  CheckOpts check;
  auto* check_cmd = app.add_subcommand("check", "Consistency of the published statistics tables");
  check_cmd->add_flag("--published", "Check the built-in published tables (default)");
  check_cmd->add_option("--tolerance", check.tolerance, "Relative tolerance")->capture_default_str();
  check_cmd->add_flag("--json", check.json_out, "JSON output");

  std::string calib_scenario;
  auto* calib_cmd = app.add_subcommand("calibrate", "Show the default calibration per scenario");
  calib_cmd->add_option("--scenario", calib_scenario, "Limit to one scenario");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*plan_cmd) return cmd_plan(plan);
    if (*run_cmd) return cmd_run(run, *run_cmd);
    if (*stats_cmd) return cmd_stats(stats);
    if (*report_cmd) return cmd_report(report);
    if (*check_cmd) return cmd_check(check);
    if (*calib_cmd) return cmd_calibrate(calib_scenario);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NoDataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNoData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
