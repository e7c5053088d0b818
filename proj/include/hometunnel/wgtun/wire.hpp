#pragma once

#include <cstdint>
#include <optional>

#include "hometunnel/netplan/ip.hpp"
#include "hometunnel/wgtun/suite.hpp"

namespace hometunnel::wgtun {

// Datagram framing. All integers big-endian; reserved bytes are zero.
//
// Handshake initiation, 116 bytes:
//   [0] type = 1   [1..4) reserved   [4..8) sender index
//   [8..40) initiator ephemeral public key
//   [40..88) sealed initiator static public key (32 + 16 tag)
//   [88..116) sealed TAI64N timestamp (12 + 16 tag)
//
// Handshake response, 60 bytes:
//   [0] type = 2   [1..4) reserved   [4..8) sender index   [8..12) receiver index
//   [12..44) responder ephemeral public key
//   [44..60) sealed empty payload (16 tag)
//
// Transport data, 32 + n bytes:
//   [0] type = 4   [1..4) reserved   [4..8) receiver index   [8..16) counter
//   [16..) sealed inner packet; the 16 header bytes are the associated data
//   and the counter is the nonce. An empty inner packet is a keepalive.
enum class MessageType : std::uint8_t { initiation = 1, response = 2, transport = 4 };

inline constexpr std::size_t kInitiationSize = 116;
inline constexpr std::size_t kResponseSize = 60;
inline constexpr std::size_t kTransportHeaderSize = 16;
inline constexpr std::size_t kTransportMinSize = kTransportHeaderSize + CryptoSuite::kTagSize;

struct InitiationMessage {
  std::uint32_t sender_index = 0;
  Key32 ephemeral{};
  std::array<std::uint8_t, 48> sealed_static{};
  std::array<std::uint8_t, 28> sealed_timestamp{};

  friend bool operator==(const InitiationMessage&, const InitiationMessage&) = default;
};

struct ResponseMessage {
  std::uint32_t sender_index = 0;
  std::uint32_t receiver_index = 0;
  Key32 ephemeral{};
  std::array<std::uint8_t, 16> sealed_empty{};

  friend bool operator==(const ResponseMessage&, const ResponseMessage&) = default;
};

struct TransportMessage {
  std::uint32_t receiver_index = 0;
  std::uint64_t counter = 0;
  Bytes sealed_packet;

  friend bool operator==(const TransportMessage&, const TransportMessage&) = default;
};

[[nodiscard]] Bytes encode(const InitiationMessage& m);
[[nodiscard]] Bytes encode(const ResponseMessage& m);
[[nodiscard]] Bytes encode(const TransportMessage& m);
/// The 16 bytes of a transport header, used as AEAD associated data.
[[nodiscard]] std::array<std::uint8_t, kTransportHeaderSize> transport_header(std::uint32_t receiver_index,
                                                                            std::uint64_t counter);

[[nodiscard]] std::optional<MessageType> peek_type(ByteView datagram);
[[nodiscard]] std::optional<InitiationMessage> decode_initiation(ByteView datagram);
[[nodiscard]] std::optional<ResponseMessage> decode_response(ByteView datagram);
[[nodiscard]] std::optional<TransportMessage> decode_transport(ByteView datagram);

/// Inner layer-3 packet carried through the tunnel: a plain 20-byte IPv4
/// header (no options) followed by the payload.
struct IpPacket {
  netplan::Ipv4Address src;
  netplan::Ipv4Address dst;
  std::uint8_t protocol = 6;  // TCP
  Bytes payload;

  friend bool operator==(const IpPacket&, const IpPacket&) = default;
};

[[nodiscard]] Bytes encode(const IpPacket& packet);
/// Rejects bad versions, option-bearing headers, length mismatches and bad checksums.
[[nodiscard]] std::optional<IpPacket> decode_ip(ByteView bytes);

}  // namespace hometunnel::wgtun
