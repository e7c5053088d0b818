#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "hometunnel/wgtun/suite.hpp"
#include "hometunnel/wgtun/tai64n.hpp"
#include "hometunnel/wgtun/wire.hpp"

namespace hometunnel::wgtun {

struct PeerIdentity {
  Key32 private_key{};
  Key32 public_key{};

  friend bool operator==(const PeerIdentity&, const PeerIdentity&) = default;
};

/// Deterministic per seed; the private key is clamped by the suite.
[[nodiscard]] PeerIdentity generate_identity(std::uint64_t seed, const CryptoSuite& suite);

enum class Role { initiator, responder };
enum class HandshakeStage { sent_initiation, sent_response, confirmed };

/// Noise IK-shaped handshake transcript: chaining key and running hash.
struct HandshakeState {
  Role role = Role::initiator;
  HandshakeStage stage = HandshakeStage::sent_initiation;
  PeerIdentity local_ephemeral;
  Key32 chaining_key{};
  Key32 hash{};
  Key32 remote_static{};
  Key32 remote_ephemeral{};
  std::uint32_t local_index = 0;
  std::uint32_t remote_index = 0;
};

struct SessionKeys {
  Key32 send{};
  Key32 receive{};
};

/// Initiator: ephemeral key, sealed static identity and sealed timestamp.
[[nodiscard]] std::pair<InitiationMessage, HandshakeState> create_initiation(
    const CryptoSuite& suite, const PeerIdentity& local, const Key32& remote_static,
    const PeerIdentity& ephemeral, std::uint32_t local_index, const Tai64n& timestamp);

struct ConsumedInitiation {
  HandshakeState state;
  Tai64n timestamp;
};

/// Responder: opens the initiator's static key and timestamp. Empty when the
/// sender did not use our public key or the transcript fails to authenticate.
[[nodiscard]] std::optional<ConsumedInitiation> consume_initiation(const CryptoSuite& suite,
                                                                   const PeerIdentity& local,
                                                                   const InitiationMessage& message);

/// Responder: completes the transcript and derives the responder's keys.
[[nodiscard]] std::pair<ResponseMessage, SessionKeys> create_response(const CryptoSuite& suite,
                                                                      HandshakeState& state,
                                                                      const PeerIdentity& ephemeral,
                                                                      std::uint32_t local_index);

/// Initiator: authenticates the response and derives the initiator's keys.
[[nodiscard]] std::optional<SessionKeys> finalize_initiator(const CryptoSuite& suite, const PeerIdentity& local,
                                                            HandshakeState& state,
                                                            const ResponseMessage& message);

}  // namespace hometunnel::wgtun
