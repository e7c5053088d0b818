#include "hometunnel/hubsim/https.hpp"

namespace hometunnel::hubsim {

HttpsSchedule https_overhead(Transport transport, const HttpsConfig& config, bool first_request) {
  if (!uses_tls(transport)) return {};
  HttpsSchedule s;
  s.crypto_cost = config.crypto_cost;
  if (first_request || !config.session_cache) s.extra_round_trips = config.handshake_round_trips;
  return s;
}

HttpsSchedule TlsSession::next_request() {
  const auto s = https_overhead(transport_, config_, !established_);
  established_ = true;
  return s;
}

}  // namespace hometunnel::hubsim
