#include "hometunnel/wgtun/wire.hpp"

#include <algorithm>

namespace hometunnel::wgtun {

namespace {

void put_u32(Bytes& out, std::uint32_t v) {
  for (int i = 3; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(Bytes& out, std::uint64_t v) {
  for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(ByteView in, std::size_t at) {
  std::uint32_t v = 0;
  for (std::size_t i = 0; i < 4; ++i) v = (v << 8) | in[at + i];
  return v;
}

std::uint64_t get_u64(ByteView in, std::size_t at) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 8; ++i) v = (v << 8) | in[at + i];
  return v;
}

template <class Array>
void put(Bytes& out, const Array& a) {
  out.insert(out.end(), a.begin(), a.end());
}

template <class Array>
void get(ByteView in, std::size_t at, Array& a) {
  std::copy_n(in.begin() + static_cast<std::ptrdiff_t>(at), a.size(), a.begin());
}

Bytes header(MessageType type) { return {static_cast<std::uint8_t>(type), 0, 0, 0}; }

bool header_ok(ByteView in, MessageType type) {
  return in.size() >= 4 && in[0] == static_cast<std::uint8_t>(type) && in[1] == 0 && in[2] == 0 && in[3] == 0;
}

std::uint16_t ip_checksum(ByteView header) {
  std::uint32_t sum = 0;
  for (std::size_t i = 0; i + 1 < header.size(); i += 2) sum += (std::uint32_t{header[i]} << 8) | header[i + 1];
  while (sum >> 16) sum = (sum & 0xffff) + (sum >> 16);
  return static_cast<std::uint16_t>(~sum);
}

}  // namespace

Bytes encode(const InitiationMessage& m) {
  Bytes out = header(MessageType::initiation);
  out.reserve(kInitiationSize);
  put_u32(out, m.sender_index);
  put(out, m.ephemeral);
  put(out, m.sealed_static);
  put(out, m.sealed_timestamp);
  return out;
}

Bytes encode(const ResponseMessage& m) {
  Bytes out = header(MessageType::response);
  out.reserve(kResponseSize);
  put_u32(out, m.sender_index);
  put_u32(out, m.receiver_index);
  put(out, m.ephemeral);
  put(out, m.sealed_empty);
  return out;
}

std::array<std::uint8_t, kTransportHeaderSize> transport_header(std::uint32_t receiver_index,
                                                                std::uint64_t counter) {
  Bytes out = header(MessageType::transport);
  put_u32(out, receiver_index);
  put_u64(out, counter);
  std::array<std::uint8_t, kTransportHeaderSize> h{};
  std::copy(out.begin(), out.end(), h.begin());
  return h;
}

Bytes encode(const TransportMessage& m) {
  const auto h = transport_header(m.receiver_index, m.counter);
  Bytes out(h.size() + m.sealed_packet.size());
  std::copy(h.begin(), h.end(), out.begin());
  std::copy(m.sealed_packet.begin(), m.sealed_packet.end(), out.begin() + h.size());
  return out;
}

std::optional<MessageType> peek_type(ByteView datagram) {
  if (datagram.empty()) return std::nullopt;
  switch (datagram[0]) {
    case 1: return MessageType::initiation;
    case 2: return MessageType::response;
    case 4: return MessageType::transport;
    default: return std::nullopt;
  }
}

std::optional<InitiationMessage> decode_initiation(ByteView in) {
  if (in.size() != kInitiationSize || !header_ok(in, MessageType::initiation)) return std::nullopt;
  InitiationMessage m;
  m.sender_index = get_u32(in, 4);
  get(in, 8, m.ephemeral);
  get(in, 40, m.sealed_static);
  get(in, 88, m.sealed_timestamp);
  return m;
}

std::optional<ResponseMessage> decode_response(ByteView in) {
  if (in.size() != kResponseSize || !header_ok(in, MessageType::response)) return std::nullopt;
  ResponseMessage m;
  m.sender_index = get_u32(in, 4);
  m.receiver_index = get_u32(in, 8);
  get(in, 12, m.ephemeral);
  get(in, 44, m.sealed_empty);
  return m;
}

std::optional<TransportMessage> decode_transport(ByteView in) {
  if (in.size() < kTransportMinSize || !header_ok(in, MessageType::transport)) return std::nullopt;
  TransportMessage m;
  m.receiver_index = get_u32(in, 4);
  m.counter = get_u64(in, 8);
  m.sealed_packet.assign(in.begin() + kTransportHeaderSize, in.end());
  return m;
}

Bytes encode(const IpPacket& packet) {
  const auto total = static_cast<std::uint16_t>(20 + packet.payload.size());
  Bytes out = {0x45, 0, static_cast<std::uint8_t>(total >> 8), static_cast<std::uint8_t>(total), 0, 0, 0x40, 0,
               64,   packet.protocol, 0, 0};
  put_u32(out, packet.src.value());
  put_u32(out, packet.dst.value());
  const auto sum = ip_checksum(out);
  out[10] = static_cast<std::uint8_t>(sum >> 8);
  out[11] = static_cast<std::uint8_t>(sum);
  out.insert(out.end(), packet.payload.begin(), packet.payload.end());
  return out;
}

std::optional<IpPacket> decode_ip(ByteView in) {
  if (in.size() < 20 || in[0] != 0x45) return std::nullopt;
  const std::size_t total = (std::size_t{in[2]} << 8) | in[3];
  if (total != in.size() || ip_checksum(in.first(20)) != 0) return std::nullopt;
  IpPacket p;
  p.protocol = in[9];
  p.src = netplan::Ipv4Address(get_u32(in, 12));
  p.dst = netplan::Ipv4Address(get_u32(in, 16));
  p.payload.assign(in.begin() + 20, in.end());
  return p;
}

}  // namespace hometunnel::wgtun
