#include "hometunnel/wgtun/handshake.hpp"

#include <algorithm>
#include <string_view>

namespace hometunnel::wgtun {

namespace {

constexpr std::string_view kConstruction = "hometunnel IK 25519 ChaChaPoly v1";
constexpr std::string_view kIdentifier = "hometunnel handshake";

ByteView view(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

struct Transcript {
  Key32 ck;
  Key32 h;
};

Transcript initial_transcript(const CryptoSuite& suite, const Key32& responder_static) {
  Transcript t;
  t.ck = suite.hash(view(kConstruction));
  t.h = hash_concat(suite, t.ck, view(kIdentifier));
  t.h = hash_concat(suite, t.h, responder_static);
  return t;
}

void mix_hash(const CryptoSuite& suite, Transcript& t, ByteView data) { t.h = hash_concat(suite, t.h, data); }

Key32 kdf1(const CryptoSuite& suite, const Key32& ck, ByteView input) { return kdf3(suite, ck, input)[0]; }

std::optional<Key32> dh(const CryptoSuite& suite, const Key32& priv, const Key32& pub) {
  return suite.agree(priv, pub);
}

template <std::size_t N>
bool copy_into(std::array<std::uint8_t, N>& dst, const Bytes& src) {
  if (src.size() != N) return false;
  std::copy(src.begin(), src.end(), dst.begin());
  return true;
}

}  // namespace

PeerIdentity generate_identity(std::uint64_t seed, const CryptoSuite& suite) {
  std::array<std::uint8_t, 8 + 17> input{};
  constexpr std::string_view label = "hometunnel seed:";
  std::copy(label.begin(), label.end(), input.begin());
  for (int i = 0; i < 8; ++i) input[label.size() + i] = static_cast<std::uint8_t>(seed >> (8 * i));
  PeerIdentity id;
  id.private_key = suite.clamp(suite.hash(ByteView(input.data(), label.size() + 8)));
  id.public_key = suite.public_key(id.private_key);
  return id;
}

std::pair<InitiationMessage, HandshakeState> create_initiation(const CryptoSuite& suite, const PeerIdentity& local,
                                                               const Key32& remote_static,
                                                               const PeerIdentity& ephemeral,
                                                               std::uint32_t local_index,
                                                               const Tai64n& timestamp) {
  Transcript t = initial_transcript(suite, remote_static);
  InitiationMessage msg;
  msg.sender_index = local_index;
  msg.ephemeral = ephemeral.public_key;

  t.ck = kdf1(suite, t.ck, ephemeral.public_key);
  mix_hash(suite, t, ephemeral.public_key);

  const Key32 es = dh(suite, ephemeral.private_key, remote_static).value_or(Key32{});
  auto out = kdf3(suite, t.ck, es);
  t.ck = out[0];
  copy_into(msg.sealed_static, suite.seal(out[1], 0, local.public_key, t.h));
  mix_hash(suite, t, msg.sealed_static);

  const Key32 ss = dh(suite, local.private_key, remote_static).value_or(Key32{});
  out = kdf3(suite, t.ck, ss);
  t.ck = out[0];
  const auto ts = timestamp.encode();
  copy_into(msg.sealed_timestamp, suite.seal(out[1], 0, ts, t.h));
  mix_hash(suite, t, msg.sealed_timestamp);

  HandshakeState state;
  state.role = Role::initiator;
  state.stage = HandshakeStage::sent_initiation;
  state.local_ephemeral = ephemeral;
  state.chaining_key = t.ck;
  state.hash = t.h;
  state.remote_static = remote_static;
  state.local_index = local_index;
  return {msg, state};
}

std::optional<ConsumedInitiation> consume_initiation(const CryptoSuite& suite, const PeerIdentity& local,
                                                     const InitiationMessage& message) {
  Transcript t = initial_transcript(suite, local.public_key);
  t.ck = kdf1(suite, t.ck, message.ephemeral);
  mix_hash(suite, t, message.ephemeral);

  const auto es = dh(suite, local.private_key, message.ephemeral);
  if (!es) return std::nullopt;
  auto out = kdf3(suite, t.ck, *es);
  t.ck = out[0];
  const auto initiator_static = suite.open(out[1], 0, message.sealed_static, t.h);
  if (!initiator_static || initiator_static->size() != 32) return std::nullopt;
  mix_hash(suite, t, message.sealed_static);

  Key32 remote_static{};
  std::copy(initiator_static->begin(), initiator_static->end(), remote_static.begin());
  const auto ss = dh(suite, local.private_key, remote_static);
  if (!ss) return std::nullopt;
  out = kdf3(suite, t.ck, *ss);
  t.ck = out[0];
  const auto ts_bytes = suite.open(out[1], 0, message.sealed_timestamp, t.h);
  if (!ts_bytes) return std::nullopt;
  const auto ts = Tai64n::decode(*ts_bytes);
  if (!ts) return std::nullopt;
  mix_hash(suite, t, message.sealed_timestamp);

  ConsumedInitiation result{HandshakeState{}, *ts};
  result.state.role = Role::responder;
  result.state.stage = HandshakeStage::sent_initiation;
  result.state.chaining_key = t.ck;
  result.state.hash = t.h;
  result.state.remote_static = remote_static;
  result.state.remote_ephemeral = message.ephemeral;
  result.state.remote_index = message.sender_index;
  return result;
}

std::pair<ResponseMessage, SessionKeys> create_response(const CryptoSuite& suite, HandshakeState& state,
                                                        const PeerIdentity& ephemeral, std::uint32_t local_index) {
  Transcript t{state.chaining_key, state.hash};
  ResponseMessage msg;
  msg.sender_index = local_index;
  msg.receiver_index = state.remote_index;
  msg.ephemeral = ephemeral.public_key;

  t.ck = kdf1(suite, t.ck, ephemeral.public_key);
  mix_hash(suite, t, ephemeral.public_key);
  t.ck = kdf1(suite, t.ck, dh(suite, ephemeral.private_key, state.remote_ephemeral).value_or(Key32{}));
  t.ck = kdf1(suite, t.ck, dh(suite, ephemeral.private_key, state.remote_static).value_or(Key32{}));

  const Key32 psk{};
  const auto out = kdf3(suite, t.ck, psk);
  t.ck = out[0];
  mix_hash(suite, t, out[1]);
  copy_into(msg.sealed_empty, suite.seal(out[2], 0, ByteView{}, t.h));
  mix_hash(suite, t, msg.sealed_empty);

  const auto transport = kdf3(suite, t.ck, ByteView{});
  state.local_ephemeral = ephemeral;
  state.local_index = local_index;
  state.chaining_key = t.ck;
  state.hash = t.h;
  state.stage = HandshakeStage::sent_response;
  return {msg, SessionKeys{transport[1], transport[0]}};
}

std::optional<SessionKeys> finalize_initiator(const CryptoSuite& suite, const PeerIdentity& local,
                                              HandshakeState& state, const ResponseMessage& message) {
  if (state.role != Role::initiator || state.stage != HandshakeStage::sent_initiation) return std::nullopt;
  if (message.receiver_index != state.local_index) return std::nullopt;
  Transcript t{state.chaining_key, state.hash};
  t.ck = kdf1(suite, t.ck, message.ephemeral);
  mix_hash(suite, t, message.ephemeral);
  const auto ee = dh(suite, state.local_ephemeral.private_key, message.ephemeral);
  const auto se = dh(suite, local.private_key, message.ephemeral);
  if (!ee || !se) return std::nullopt;
  t.ck = kdf1(suite, t.ck, *ee);
  t.ck = kdf1(suite, t.ck, *se);

  const Key32 psk{};
  const auto out = kdf3(suite, t.ck, psk);
  t.ck = out[0];
  mix_hash(suite, t, out[1]);
  if (!suite.open(out[2], 0, message.sealed_empty, t.h)) return std::nullopt;
  mix_hash(suite, t, message.sealed_empty);

  const auto transport = kdf3(suite, t.ck, ByteView{});
  state.chaining_key = t.ck;
  state.hash = t.h;
  state.remote_ephemeral = message.ephemeral;
  state.remote_index = message.sender_index;
  state.stage = HandshakeStage::confirmed;
  return SessionKeys{transport[0], transport[1]};
}

}  // namespace hometunnel::wgtun
