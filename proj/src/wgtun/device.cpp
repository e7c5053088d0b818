#include "hometunnel/wgtun/device.hpp"

#include <charconv>
#include <stdexcept>

namespace hometunnel::wgtun {

namespace {

constexpr std::size_t kMaxStaged = 1024;

}  // namespace

Endpoint Endpoint::parse(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("endpoint needs address:port");
  Endpoint e;
  e.address = netplan::Ipv4Address::parse(text.substr(0, colon));
  const auto port_text = text.substr(colon + 1);
  unsigned value = 0;
  const auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), value);
  if (ec != std::errc{} || ptr != port_text.data() + port_text.size() || value == 0 || value > 65535) {
    throw std::invalid_argument("bad endpoint port: " + std::string(port_text));
  }
  e.port = static_cast<std::uint16_t>(value);
  return e;
}

std::string Endpoint::to_string() const { return address.to_string() + ":" + std::to_string(port); }

std::string_view to_string(SealStatus s) {
  switch (s) {
    case SealStatus::sent: return "sent";
    case SealStatus::handshake_started: return "handshake-started";
    case SealStatus::handshake_pending: return "handshake-pending";
    case SealStatus::no_route: return "no-route";
    case SealStatus::no_endpoint: return "no-endpoint";
    case SealStatus::refused: return "refused";
  }
  return "?";
}

TunnelDevice::TunnelDevice(PeerIdentity identity, std::uint16_t listen_port, std::uint64_t seed,
                           std::shared_ptr<const CryptoSuite> suite, RekeyPolicy policy)
    : identity_(identity), listen_port_(listen_port), suite_(std::move(suite)), policy_(policy), rng_(seed) {
  if (!suite_) throw std::invalid_argument("crypto suite required");
}

PeerId TunnelDevice::add_peer(PeerConfig config) {
  if (find_peer(config.public_key)) throw std::invalid_argument("peer key already registered");
  for (const auto& p : peers_) {
    for (const auto& mine : config.allowed_ips) {
      for (const auto& theirs : p.config.allowed_ips) {
        if (mine.overlaps(theirs)) {
          throw std::invalid_argument("allowed-ips " + mine.to_string() + " overlaps " + theirs.to_string());
        }
      }
    }
  }
  peers_.push_back(PeerState{std::move(config), {}, {}, {}, {}, {}, {}, {}});
  return peers_.size() - 1;
}

std::optional<PeerId> TunnelDevice::find_peer(const Key32& public_key) const {
  for (PeerId i = 0; i < peers_.size(); ++i) {
    if (peers_[i].config.public_key == public_key) return i;
  }
  return std::nullopt;
}

std::optional<PeerId> TunnelDevice::route(netplan::Ipv4Address destination) const {
  std::optional<PeerId> best;
  int best_prefix = -1;
  for (PeerId i = 0; i < peers_.size(); ++i) {
    for (const auto& net : peers_[i].config.allowed_ips) {
      if (net.contains(destination) && net.prefix() > best_prefix) {
        best = i;
        best_prefix = net.prefix();
      }
    }
  }
  return best;
}

const PeerSession* TunnelDevice::current_session(PeerId id) const {
  const auto& s = peers_.at(id).current;
  return s ? &*s : nullptr;
}

const PeerSession* TunnelDevice::unconfirmed_session(PeerId id) const {
  const auto& s = peers_.at(id).next;
  return s ? &*s : nullptr;
}

const PeerSession* TunnelDevice::previous_session(PeerId id) const {
  const auto& s = peers_.at(id).previous;
  return s ? &*s : nullptr;
}

const HandshakeState* TunnelDevice::pending_handshake(PeerId id) const {
  const auto& h = peers_.at(id).handshake;
  return h ? &*h : nullptr;
}

std::uint32_t TunnelDevice::allocate_index(PeerId id) {
  for (;;) {
    const auto candidate = static_cast<std::uint32_t>(rng_());
    if (candidate != 0 && !indices_.contains(candidate)) {
      indices_.emplace(candidate, id);
      return candidate;
    }
  }
}

void TunnelDevice::release_index(std::uint32_t index) { indices_.erase(index); }

void TunnelDevice::drop_session(std::optional<PeerSession>& slot) {
  if (slot) release_index(slot->local_index);
  slot.reset();
}

PeerIdentity TunnelDevice::fresh_ephemeral() {
  Key32 raw{};
  for (std::size_t i = 0; i < raw.size(); i += 8) {
    const auto word = rng_();
    for (std::size_t j = 0; j < 8; ++j) raw[i + j] = static_cast<std::uint8_t>(word >> (8 * j));
  }
  PeerIdentity e;
  e.private_key = suite_->clamp(raw);
  e.public_key = suite_->public_key(e.private_key);
  return e;
}

bool TunnelDevice::expired(const PeerSession& s, Millis now) const {
  return now - s.established_at >= policy_.reject_after;
}

PeerSession* TunnelDevice::usable_session(PeerState& peer, Millis now) {
  if (peer.current && !expired(*peer.current, now)) return &*peer.current;
  return nullptr;
}

Datagram TunnelDevice::start_handshake(PeerId id, Millis now, bool retry) {
  auto& p = peers_[id];
  if (!p.config.endpoint) throw std::logic_error("peer endpoint unknown");
  if (p.handshake) release_index(p.handshake->local_index);
  const auto ephemeral = fresh_ephemeral();
  const auto index = allocate_index(id);
  auto [msg, state] =
      create_initiation(*suite_, identity_, p.config.public_key, ephemeral, index, Tai64n::from_sim(now));
  p.handshake = state;
  p.handshake_sent_at = now;
  if (!retry) p.handshake_first_sent_at = now;
  ++counters_.initiations_sent;
  return Datagram{*p.config.endpoint, encode(msg), false};
}

Datagram TunnelDevice::initiate(PeerId id, Millis now) { return start_handshake(id, now, false); }

Datagram TunnelDevice::seal_on(PeerState& peer, PeerSession& session, const Bytes& plaintext, bool keepalive) {
  const std::uint64_t counter = session.send_counter++;
  const auto header = transport_header(session.remote_index, counter);
  TransportMessage m{session.remote_index, counter, suite_->seal(session.send_key, counter, plaintext, header)};
  ++session.messages_since_handshake;
  ++counters_.transport_sent;
  return Datagram{*peer.config.endpoint, encode(m), keepalive};
}

std::optional<Datagram> TunnelDevice::respond(ByteView datagram, const Endpoint& source, Millis now,
                                              bool& crossed) {
  const auto msg = decode_initiation(datagram);
  if (!msg) return std::nullopt;
  auto consumed = consume_initiation(*suite_, identity_, *msg);
  if (!consumed) return std::nullopt;
  const auto id = find_peer(consumed->state.remote_static);
  if (!id) return std::nullopt;
  auto& p = peers_[*id];
  if (consumed->timestamp <= p.config.last_seen) return std::nullopt;
  if (p.handshake) {
    ++counters_.crossed_initiations;
    if (identity_.public_key > p.config.public_key) {
      crossed = true;
      return std::nullopt;
    }
    release_index(p.handshake->local_index);
    p.handshake.reset();
  }

  p.config.last_seen = consumed->timestamp;
  p.config.endpoint = source;
  const auto index = allocate_index(*id);
  auto [response, keys] = create_response(*suite_, consumed->state, fresh_ephemeral(), index);

  PeerSession s;
  s.role = Role::responder;
  s.send_key = keys.send;
  s.receive_key = keys.receive;
  s.established_at = now;
  s.local_index = index;
  s.remote_index = msg->sender_index;
  drop_session(p.next);
  p.next = std::move(s);
  ++counters_.responses_sent;
  return Datagram{source, encode(response), false};
}

std::vector<Datagram> TunnelDevice::finalize(ByteView datagram, const Endpoint& source, Millis now) {
  const auto msg = decode_response(datagram);
  if (!msg) return {};
  const auto it = indices_.find(msg->receiver_index);
  if (it == indices_.end()) return {};
  const PeerId id = it->second;
  auto& p = peers_[id];
  if (!p.handshake || p.handshake->local_index != msg->receiver_index) return {};

  const auto keys = finalize_initiator(*suite_, identity_, *p.handshake, *msg);
  if (!keys) {
    release_index(p.handshake->local_index);
    p.handshake.reset();
    return {};
  }

  PeerSession s;
  s.role = Role::initiator;
  s.send_key = keys->send;
  s.receive_key = keys->receive;
  s.established_at = now;
  s.local_index = p.handshake->local_index;
  s.remote_index = msg->sender_index;
  s.confirmed = true;
  p.handshake.reset();
  drop_session(p.previous);
  p.previous = std::move(p.current);
  p.current = std::move(s);
  p.config.endpoint = source;
  ++counters_.handshakes_completed;

  std::vector<Datagram> out;
  while (!p.staged.empty()) {
    out.push_back(seal_on(p, *p.current, encode(p.staged.front()), false));
    p.staged.pop_front();
  }
  if (out.empty()) out.push_back(seal_on(p, *p.current, Bytes{}, true));
  return out;
}

SealResult TunnelDevice::seal(const IpPacket& packet, Millis now) {
  SealResult result;
  const auto id = route(packet.dst);
  if (!id) return result;
  result.peer = id;
  auto& p = peers_[*id];
  if (auto* s = usable_session(p, now)) {
    result.status = SealStatus::sent;
    result.datagrams.push_back(seal_on(p, *s, encode(packet), false));
    return result;
  }
  if (p.next && !expired(*p.next, now)) {
    result.status = SealStatus::refused;
    return result;
  }
  if (p.handshake) {
    if (p.staged.size() < kMaxStaged) p.staged.push_back(packet);
    result.status = SealStatus::handshake_pending;
    return result;
  }
  if (!p.config.endpoint) {
    result.status = SealStatus::no_endpoint;
    return result;
  }
  p.staged.push_back(packet);
  result.status = SealStatus::handshake_started;
  result.datagrams.push_back(start_handshake(*id, now, false));
  return result;
}

Inbound TunnelDevice::open(ByteView datagram, const Endpoint& source, Millis now) {
  Inbound in;
  const auto msg = decode_transport(datagram);
  const auto it = msg ? indices_.find(msg->receiver_index) : indices_.end();
  if (it == indices_.end()) {
    ++counters_.dropped;
    ++counters_.transport_dropped;
    return in;
  }
  const PeerId id = it->second;
  auto& p = peers_[id];
  std::optional<PeerSession>* slot = nullptr;
  for (auto* candidate : {&p.next, &p.current, &p.previous}) {
    if (*candidate && (*candidate)->local_index == msg->receiver_index) slot = candidate;
  }
  if (!slot || expired(**slot, now) || !(*slot)->receive_window.check(msg->counter)) {
    ++counters_.dropped;
    ++counters_.transport_dropped;
    return in;
  }
  auto& session = **slot;
  const auto header = transport_header(msg->receiver_index, msg->counter);
  const auto plaintext = suite_->open(session.receive_key, msg->counter, msg->sealed_packet, header);
  if (!plaintext) {
    ++counters_.dropped;
    ++counters_.transport_dropped;
    return in;
  }
  session.receive_window.accept(msg->counter);
  ++session.messages_since_handshake;
  ++counters_.transport_received;
  in.authenticated = true;
  in.peer = id;
  p.config.endpoint = source;

  if (slot == &p.next) {
    p.next->confirmed = true;
    drop_session(p.previous);
    p.previous = std::move(p.current);
    p.current = std::move(p.next);
    p.next.reset();
    ++counters_.handshakes_completed;
    while (!p.staged.empty()) {
      in.replies.push_back(seal_on(p, *p.current, encode(p.staged.front()), false));
      p.staged.pop_front();
    }
  }

  if (plaintext->empty()) return in;
  auto packet = decode_ip(*plaintext);
  if (!packet || route(packet->src) != std::optional<PeerId>(id)) {
    ++counters_.dropped;
    ++counters_.transport_dropped;
    return in;
  }
  in.packet = std::move(packet);
  return in;
}

std::vector<TickAction> TunnelDevice::tick(Millis now) {
  std::vector<TickAction> actions;
  for (PeerId id = 0; id < peers_.size(); ++id) {
    auto& p = peers_[id];
    for (auto* slot : {&p.next, &p.current, &p.previous}) {
      if (*slot && expired(**slot, now)) {
        drop_session(*slot);
        actions.push_back({TickAction::Kind::session_expired, id, std::nullopt});
      }
    }
    if (p.handshake) {
      if (now - p.handshake_first_sent_at >= policy_.give_up_after) {
        release_index(p.handshake->local_index);
        p.handshake.reset();
        p.staged.clear();
        actions.push_back({TickAction::Kind::handshake_abandoned, id, std::nullopt});
      } else if (now - p.handshake_sent_at >= policy_.rekey_timeout) {
        actions.push_back({TickAction::Kind::handshake_retry, id, start_handshake(id, now, true)});
      }
      continue;
    }
    if (!p.current || !p.config.endpoint) continue;
    if (p.next && now - p.next->established_at < policy_.rekey_timeout) continue;
    const auto& s = *p.current;
    const bool by_count = s.messages_since_handshake >= policy_.max_messages;
    const bool by_age = s.role == Role::initiator && now - s.established_at >= policy_.max_session_age;
    if (by_count || by_age) {
      actions.push_back({TickAction::Kind::rekey_initiation, id, start_handshake(id, now, false)});
    }
  }
  return actions;
}

Inbound TunnelDevice::receive(ByteView datagram, const Endpoint& source, Millis now) {
  const auto type = peek_type(datagram);
  if (!type) {
    ++counters_.dropped;
    return {};
  }
  switch (*type) {
    case MessageType::initiation: {
      Inbound in;
      bool crossed = false;
      if (auto reply = respond(datagram, source, now, crossed)) {
        in.authenticated = true;
        in.replies.push_back(std::move(*reply));
      } else if (!crossed) {
        ++counters_.dropped;
      }
      return in;
    }
    case MessageType::response: {
      Inbound in;
      in.replies = finalize(datagram, source, now);
      in.authenticated = !in.replies.empty();
      if (!in.authenticated) ++counters_.dropped;
      return in;
    }
    case MessageType::transport:
      return open(datagram, source, now);
  }
  return {};
}

}  // namespace hometunnel::wgtun
