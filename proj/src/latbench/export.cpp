#include "hometunnel/latbench/sample.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hometunnel::latbench {

namespace {

std::string fmt(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <typename T>
T parse_number(std::string_view field, std::string_view what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw std::invalid_argument("bad " + std::string(what) + ": '" + std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

constexpr std::string_view kHeader = "scenario,seq,issued_ms,replied_ms,delay_ms,status";

}  // namespace

std::string_view to_string(SampleStatus s) { return s == SampleStatus::ok ? "ok" : "failed"; }

std::vector<double> ok_delays(const std::vector<DelaySample>& samples) {
  std::vector<double> out;
  for (const auto& s : samples) {
    if (s.status == SampleStatus::ok && s.delay) out.push_back(s.delay->count());
  }
  return out;
}

std::string samples_csv(std::string_view scenario, const std::vector<DelaySample>& samples) {
  std::string out(kHeader);
  out += '\n';
  for (const auto& s : samples) {
    out += scenario;
    out += ',' + std::to_string(s.sequence);
    out += ',' + fmt(s.issued_at.count());
    out += ',' + fmt(s.replied_at.count());
    out += ',';
    if (s.delay) out += fmt(s.delay->count());
    out += ',';
    out += to_string(s.status);
    out += '\n';
  }
  return out;
}

SampleSet samples_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty sample file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) throw std::invalid_argument("sample CSV header mismatch");
  SampleSet set;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 6) throw std::invalid_argument("sample row needs 6 fields: " + line);
    if (first) {
      set.scenario = std::string(f[0]);
      first = false;
    } else if (f[0] != set.scenario) {
      throw std::invalid_argument("rows from more than one scenario");
    }
    DelaySample s;
    s.sequence = parse_number<std::uint64_t>(f[1], "seq");
    s.issued_at = Millis{parse_number<double>(f[2], "issued_ms")};
    s.replied_at = Millis{parse_number<double>(f[3], "replied_ms")};
    if (f[5] == "ok") {
      s.status = SampleStatus::ok;
      s.delay = Millis{parse_number<double>(f[4], "delay_ms")};
    } else if (f[5] == "failed") {
      s.status = SampleStatus::failed;
      if (!f[4].empty()) throw std::invalid_argument("failed sample with a delay: " + line);
    } else {
      throw std::invalid_argument("bad status: " + std::string(f[5]));
    }
    set.samples.push_back(s);
  }
  return set;
}

void export_samples(std::string_view scenario, const std::vector<DelaySample>& samples, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << samples_csv(scenario, samples);
  if (!out) throw std::runtime_error("write failed: " + path);
}

SampleSet import_samples(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return samples_from_csv(buf.str());
}

}  // namespace hometunnel::latbench
