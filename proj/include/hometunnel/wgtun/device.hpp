#pragma once

#include <compare>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "hometunnel/netplan/ip.hpp"
#include "hometunnel/simnet/time.hpp"
#include "hometunnel/wgtun/handshake.hpp"
#include "hometunnel/wgtun/replay.hpp"
#include "hometunnel/wgtun/suite.hpp"
#include "hometunnel/wgtun/tai64n.hpp"
#include "hometunnel/wgtun/wire.hpp"

namespace hometunnel::wgtun {

using simnet::Millis;

struct Endpoint {
  netplan::Ipv4Address address;
  std::uint16_t port = 0;

  /// "a.b.c.d:port"; throws std::invalid_argument on malformed text.
  static Endpoint parse(std::string_view text);
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const Endpoint&, const Endpoint&) = default;
  friend auto operator<=>(const Endpoint&, const Endpoint&) = default;
};

struct Datagram {
  Endpoint to;
  Bytes bytes;
  bool keepalive = false;
};

struct RekeyPolicy {
  std::uint64_t max_messages = std::uint64_t{1} << 16;
  Millis max_session_age = Millis{120'000};
  Millis rekey_timeout = Millis{5'000};
  Millis reject_after = Millis{180'000};
  Millis give_up_after = Millis{90'000};
};

struct PeerConfig {
  Key32 public_key{};
  std::vector<netplan::Ipv4Network> allowed_ips;
  std::optional<Endpoint> endpoint;
  Tai64n last_seen{};
};

struct PeerSession {
  Role role = Role::initiator;
  Key32 send_key{};
  Key32 receive_key{};
  std::uint64_t send_counter = 0;
  ReplayWindow receive_window;
  Millis established_at{0};
  std::uint64_t messages_since_handshake = 0;
  std::uint32_t local_index = 0;
  std::uint32_t remote_index = 0;
  bool confirmed = false;
};

using PeerId = std::size_t;

enum class SealStatus { sent, handshake_started, handshake_pending, no_route, no_endpoint, refused };
[[nodiscard]] std::string_view to_string(SealStatus s);

struct SealResult {
  SealStatus status = SealStatus::no_route;
  std::optional<PeerId> peer;
  std::vector<Datagram> datagrams;
};

struct TickAction {
  enum class Kind { rekey_initiation, handshake_retry, handshake_abandoned, session_expired };
  Kind kind;
  PeerId peer;
  std::optional<Datagram> datagram;
};

/// Result of feeding one inbound datagram to the device.
struct Inbound {
  bool authenticated = false;
  std::optional<PeerId> peer;
  std::optional<IpPacket> packet;  // absent for handshakes, keepalives and drops
  std::vector<Datagram> replies;
};

struct DeviceCounters {
  std::uint64_t initiations_sent = 0;
  std::uint64_t responses_sent = 0;
  std::uint64_t handshakes_completed = 0;
  std::uint64_t transport_sent = 0;
  std::uint64_t transport_received = 0;
  std::uint64_t dropped = 0;
  std::uint64_t transport_dropped = 0;  // subset of dropped
  // Initiations crossing our own; the larger public key keeps its handshake.
  std::uint64_t crossed_initiations = 0;
};

class TunnelDevice {
public:
  TunnelDevice(PeerIdentity identity, std::uint16_t listen_port, std::uint64_t seed,
               std::shared_ptr<const CryptoSuite> suite = default_suite(), RekeyPolicy policy = {});

  /// Throws std::invalid_argument when the key is already registered or an
  /// allowed-ips block overlaps another peer's.
  PeerId add_peer(PeerConfig config);

  [[nodiscard]] const PeerIdentity& identity() const { return identity_; }
  [[nodiscard]] std::uint16_t listen_port() const { return listen_port_; }
  [[nodiscard]] const RekeyPolicy& policy() const { return policy_; }
  [[nodiscard]] std::size_t peer_count() const { return peers_.size(); }
  [[nodiscard]] const PeerConfig& peer(PeerId id) const { return peers_.at(id).config; }
  [[nodiscard]] std::optional<PeerId> find_peer(const Key32& public_key) const;
  /// Cryptokey routing: the peer whose allowed-ips has the longest matching prefix.
  [[nodiscard]] std::optional<PeerId> route(netplan::Ipv4Address destination) const;

  [[nodiscard]] const PeerSession* current_session(PeerId id) const;
  [[nodiscard]] const PeerSession* unconfirmed_session(PeerId id) const;
  [[nodiscard]] const PeerSession* previous_session(PeerId id) const;
  [[nodiscard]] const HandshakeState* pending_handshake(PeerId id) const;
  [[nodiscard]] const DeviceCounters& counters() const { return counters_; }

  /// Throws std::logic_error when the peer has no known endpoint.
  Datagram initiate(PeerId id, Millis now);
  std::optional<Datagram> respond(ByteView datagram, const Endpoint& source, Millis now, bool& crossed);
  /// Datagrams released by a completed handshake: staged packets, or one keepalive.
  std::vector<Datagram> finalize(ByteView datagram, const Endpoint& source, Millis now);
  SealResult seal(const IpPacket& packet, Millis now);
  Inbound open(ByteView datagram, const Endpoint& source, Millis now);
  std::vector<TickAction> tick(Millis now);

  /// Dispatches on the message type.
  Inbound receive(ByteView datagram, const Endpoint& source, Millis now);

private:
  struct PeerState {
    PeerConfig config;
    std::optional<HandshakeState> handshake;
    Millis handshake_sent_at{0};
    Millis handshake_first_sent_at{0};
    std::optional<PeerSession> next;
    std::optional<PeerSession> current;
    std::optional<PeerSession> previous;
    std::deque<IpPacket> staged;
  };

  std::uint32_t allocate_index(PeerId id);
  void release_index(std::uint32_t index);
  void drop_session(std::optional<PeerSession>& slot);
  PeerIdentity fresh_ephemeral();
  Datagram start_handshake(PeerId id, Millis now, bool retry);
  Datagram seal_on(PeerState& peer, PeerSession& session, const Bytes& plaintext, bool keepalive);
  [[nodiscard]] bool expired(const PeerSession& s, Millis now) const;
  PeerSession* usable_session(PeerState& peer, Millis now);

  PeerIdentity identity_;
  std::uint16_t listen_port_;
  std::shared_ptr<const CryptoSuite> suite_;
  RekeyPolicy policy_;
  std::mt19937_64 rng_;
  std::vector<PeerState> peers_;
  std::map<std::uint32_t, PeerId> indices_;
  DeviceCounters counters_;
};

}  // namespace hometunnel::wgtun
