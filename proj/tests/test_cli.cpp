#include <doctest.h>

#include <sys/wait.h>

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome homelab(const std::string& args) {
  const std::string cmd = std::string(HOMELAB_BIN) + " " + args + " 2>/dev/null";
  Outcome r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("homelab_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  [[nodiscard]] std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("usage errors") {
  CHECK(homelab("").code == 2);
  CHECK(homelab("frobnicate").code == 2);
  CHECK(homelab("run --scenario bogus").code == 2);
  CHECK(homelab("run").code == 2);
  CHECK(homelab("stats --nope").code == 2);
  CHECK(homelab("plan --ipv6-global-id 1099511627776").code == 2);
  CHECK(homelab("plan --ipv6-global-id banana").code == 2);
  CHECK(homelab("check --tolerance 0").code == 2);
  CHECK(homelab("--help").code == 0);
}

TEST_CASE("plan") {
  TempDir tmp;
  auto r = homelab("plan --out " + (tmp / "plan.json"));
  CHECK(r.code == 0);
  const auto plan = slurp(tmp / "plan.json");
  CHECK(plan.find("192.168.32.0") != std::string::npos);
  CHECK(plan.find("C0.A8.20.00") != std::string::npos);
  const auto fw = slurp(tmp / "plan.firewall.txt");
  CHECK(fw.find("deny Guest -> Home") != std::string::npos);

  r = homelab("plan --ipv6-global-id 0");
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["ipv6"]["site"] == "fd00:0000:0000::/48");
  CHECK(doc["subnets"].size() == 11);

  r = homelab("plan --ipv6-global-id 0x0123456789");
  CHECK(r.out.find("fd01:2345:6789:0021::/64") != std::string::npos);
  CHECK(homelab("plan --ipv6-global-id 1099511627775").code == 0);
}

TEST_CASE("run, stats and report") {
  TempDir tmp;
  const auto csv = tmp / "office.csv";
  auto r = homelab("run --scenario wg-http-office --seed 7 --count 1000 --out " + csv + " --match-out " +
                   (tmp / "match.json"));
  CHECK(r.code == 0);
  const auto text = slurp(csv);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1001);
  CHECK(text.rfind("scenario,seq,issued_ms,replied_ms,delay_ms,status\n", 0) == 0);
  CHECK(fs::exists(tmp / "office.events.csv"));
  const auto match = nlohmann::json::parse(slurp(tmp / "match.json"));
  CHECK(match["matched"].size() == 1000);
  CHECK(match["orphan_events"].empty());

  const auto again = tmp / "office2.csv";
  CHECK(homelab("run --scenario wg-http-office --seed 7 --count 1000 --out " + again).code == 0);
  CHECK(slurp(again) == text);
  CHECK(slurp(tmp / "office2.events.csv") == slurp(tmp / "office.events.csv"));

  r = homelab("stats --in " + csv + " --json");
  CHECK(r.code == 0);
  const auto summary = nlohmann::json::parse(r.out);
  CHECK(summary["Count"] == 1000);
  CHECK(std::fabs(summary["Mean"].get<double>() / 158.84 - 1) <= 0.05);
  CHECK(summary["Minimum"].get<double>() >= 117.34);

  r = homelab("report --in " + csv + " --bins 1");
  CHECK(r.code == 0);
  CHECK(r.out.find("p97 ") != std::string::npos);
  const auto hist = slurp(tmp / "office.hist.csv");
  CHECK(std::count(hist.begin(), hist.end(), '\n') == 2);
  CHECK(hist.substr(hist.size() - 6) == ",1000\n");
  const auto cdf = slurp(tmp / "office.cdf.csv");
  CHECK(std::count(cdf.begin(), cdf.end(), '\n') == 2);
  CHECK(cdf.substr(cdf.size() - 3) == ",1\n");
}

TEST_CASE("lan report percentiles") {
  TempDir tmp;
  const auto csv = tmp / "lan.csv";
  REQUIRE(homelab("run --scenario LAN-LOCAL --out " + csv).code == 0);
  const auto r = homelab("report --in " + csv + " --percentiles 0.95,0.97,0.99");
  CHECK(r.code == 0);
  const auto at = r.out.find("p97 ");
  REQUIRE(at != std::string::npos);
  const double p97 = std::stod(r.out.substr(at + 4));
  CHECK(std::fabs(p97 / 105 - 1) <= 0.10);
  CHECK(r.out.find("p95 ") != std::string::npos);
  CHECK(r.out.find("p99 ") != std::string::npos);
  const auto cdf = slurp(tmp / "lan.cdf.csv");
  CHECK(cdf.substr(cdf.size() - 3) == ",1\n");
}

TEST_CASE("stats on synthetic and empty inputs") {
  TempDir tmp;
  std::string five = "scenario,seq,issued_ms,replied_ms,delay_ms,status\n";
  for (int i = 1; i <= 5; ++i) {
    five += "lan-local," + std::to_string(i) + ",0," + std::to_string(i) + "," + std::to_string(i) + ",ok\n";
  }
  spit(tmp / "five.csv", five);
  auto r = homelab("stats --in " + (tmp / "five.csv") + " --table");
  CHECK(r.code == 0);
  CHECK(r.out.find("Mean") != std::string::npos);
  CHECK(r.out.find("3.00") != std::string::npos);
  CHECK(r.out.find("Confidence Level (95%)") != std::string::npos);
  CHECK(r.out.find("1.96") != std::string::npos);

  r = homelab("stats --in " + (tmp / "five.csv") + " --json");
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["Mean"] == 3.0);
  CHECK(doc["Kurtosis"].get<double>() == doctest::Approx(-1.2));

  spit(tmp / "failed.csv",
       "scenario,seq,issued_ms,replied_ms,delay_ms,status\nlan-local,1,0,10000,,failed\nlan-local,2,10000,20000,,failed\n");
  CHECK(homelab("stats --in " + (tmp / "failed.csv")).code == 3);
  CHECK(homelab("report --in " + (tmp / "failed.csv")).code == 3);
  CHECK(homelab("stats --in " + (tmp / "missing.csv")).code == 2);
}

TEST_CASE("a run with every command failing exits 3") {
  TempDir tmp;
  spit(tmp / "cut.json", R"({"scenario": "lan-local", "command_count": 3,
                             "access_link": {"name": "access", "min": 10, "mean": 20, "sd": 5, "loss": 1}})");
  const auto r = homelab("run --config " + (tmp / "cut.json") + " --out " + (tmp / "cut.csv"));
  CHECK(r.code == 3);
  const auto text = slurp(tmp / "cut.csv");
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  CHECK(text.find(",,failed") != std::string::npos);
}

TEST_CASE("check") {
  auto r = homelab("check --published");
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 11);
  CHECK(r.out.find("PASS 4g WG-HTTP  n~1002") != std::string::npos);

  r = homelab("check --tolerance 0.0001");
  CHECK(r.code == 1);
  CHECK(r.out.find("FAIL") != std::string::npos);

  r = homelab("check --json");
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.size() == 11);
  for (const auto& col : doc) CHECK(col["pass"] == true);
}

TEST_CASE("calibrate") {
  auto r = homelab("calibrate --scenario wg-http-4g");
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc.is_object());
  CHECK(doc["floor"].get<double>() == doctest::Approx(309.79));
  CHECK(nlohmann::json::parse(homelab("calibrate").out).size() == 11);

  TempDir dir;
  {
    std::ofstream((dir / "cfg.json")) << r.out;
  }
  auto run = homelab("run --config " + (dir / "cfg.json") + " --count 20 --out " + (dir / "s.csv"));
  CHECK(run.code == 0);
}
