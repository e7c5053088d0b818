#pragma once

#include "hometunnel/hubsim/hub.hpp"

namespace hometunnel::hubsim {

struct HttpsConfig {
  bool session_cache = true;
  Millis crypto_cost{0};
  int handshake_round_trips = 2;
};

/// Added work for one request: extra round trips over the request's path plus
/// a fixed crypto cost.
struct HttpsSchedule {
  int extra_round_trips = 0;
  Millis crypto_cost{0};

  friend bool operator==(const HttpsSchedule&, const HttpsSchedule&) = default;
};

/// Plain transports add nothing. Without a session cache every request opens a
/// fresh connection and pays the handshake.
[[nodiscard]] HttpsSchedule https_overhead(Transport transport, const HttpsConfig& config, bool first_request);

/// Client-side connection state across a run.
class TlsSession {
public:
  TlsSession(Transport transport, HttpsConfig config) : transport_(transport), config_(config) {}

  /// Schedule for the next request; marks the session established.
  HttpsSchedule next_request();
  [[nodiscard]] bool established() const { return established_; }
  void reset() { established_ = false; }

private:
  Transport transport_;
  HttpsConfig config_;
  bool established_ = false;
};

}  // namespace hometunnel::hubsim
