#include "hometunnel/wgtun/suite.hpp"

#include <sodium.h>

#include <stdexcept>
#include <string>

namespace hometunnel::wgtun {

namespace {

std::array<std::uint8_t, 12> ietf_nonce(std::uint64_t counter) {
  // 32 zero bits, then the counter little-endian.
  std::array<std::uint8_t, 12> nonce{};
  for (int i = 0; i < 8; ++i) nonce[4 + i] = static_cast<std::uint8_t>(counter >> (8 * i));
  return nonce;
}

}  // namespace

SodiumSuite::SodiumSuite() {
  if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
}

Key32 SodiumSuite::clamp(Key32 raw) const {
  raw[0] &= 248;
  raw[31] &= 127;
  raw[31] |= 64;
  return raw;
}

Key32 SodiumSuite::public_key(const Key32& private_key) const {
  Key32 out{};
  crypto_scalarmult_curve25519_base(out.data(), private_key.data());
  return out;
}

std::optional<Key32> SodiumSuite::agree(const Key32& private_key, const Key32& peer_public) const {
  Key32 out{};
  if (crypto_scalarmult_curve25519(out.data(), private_key.data(), peer_public.data()) != 0) {
    return std::nullopt;
  }
  return out;
}

Bytes SodiumSuite::seal(const Key32& key, std::uint64_t nonce, ByteView plaintext, ByteView associated) const {
  Bytes out(plaintext.size() + kTagSize);
  unsigned long long written = 0;
  const auto n = ietf_nonce(nonce);
  crypto_aead_chacha20poly1305_ietf_encrypt(out.data(), &written, plaintext.data(), plaintext.size(),
                                            associated.data(), associated.size(), nullptr, n.data(), key.data());
  out.resize(written);
  return out;
}

std::optional<Bytes> SodiumSuite::open(const Key32& key, std::uint64_t nonce, ByteView ciphertext,
                                       ByteView associated) const {
  if (ciphertext.size() < kTagSize) return std::nullopt;
  Bytes out(ciphertext.size() - kTagSize);
  unsigned long long written = 0;
  const auto n = ietf_nonce(nonce);
  if (crypto_aead_chacha20poly1305_ietf_decrypt(out.data(), &written, nullptr, ciphertext.data(),
                                                ciphertext.size(), associated.data(), associated.size(),
                                                n.data(), key.data()) != 0) {
    return std::nullopt;
  }
  out.resize(written);
  return out;
}

Key32 SodiumSuite::hash(ByteView data) const {
  Key32 out{};
  crypto_generichash(out.data(), out.size(), data.data(), data.size(), nullptr, 0);
  return out;
}

Key32 SodiumSuite::mac(const Key32& key, ByteView data) const {
  static_assert(crypto_auth_hmacsha256_BYTES == 32);
  Key32 out{};
  crypto_auth_hmacsha256_state state;
  crypto_auth_hmacsha256_init(&state, key.data(), key.size());
  crypto_auth_hmacsha256_update(&state, data.data(), data.size());
  crypto_auth_hmacsha256_final(&state, out.data());
  return out;
}

std::shared_ptr<const CryptoSuite> default_suite() {
  static const auto suite = std::make_shared<const SodiumSuite>();
  return suite;
}

std::array<Key32, 3> kdf3(const CryptoSuite& suite, const Key32& key, ByteView input) {
  const Key32 prk = suite.mac(key, input);
  std::array<Key32, 3> out{};
  const std::uint8_t one = 1;
  out[0] = suite.mac(prk, {&one, 1});
  for (std::uint8_t i = 1; i < 3; ++i) {
    Bytes block(out[i - 1].begin(), out[i - 1].end());
    block.push_back(static_cast<std::uint8_t>(i + 1));
    out[i] = suite.mac(prk, block);
  }
  return out;
}

Key32 hash_concat(const CryptoSuite& suite, ByteView a, ByteView b) {
  Bytes joined(a.begin(), a.end());
  joined.insert(joined.end(), b.begin(), b.end());
  return suite.hash(joined);
}

std::string to_base64(ByteView data) {
  std::string out(sodium_base64_ENCODED_LEN(data.size(), sodium_base64_VARIANT_ORIGINAL), '\0');
  sodium_bin2base64(out.data(), out.size(), data.data(), data.size(), sodium_base64_VARIANT_ORIGINAL);
  out.resize(out.find('\0'));
  return out;
}

Key32 key_from_base64(std::string_view text) {
  Key32 out{};
  std::size_t len = 0;
  if (sodium_base642bin(out.data(), out.size(), text.data(), text.size(), nullptr, &len, nullptr,
                        sodium_base64_VARIANT_ORIGINAL) != 0 ||
      len != out.size()) {
    throw std::invalid_argument("key is not 32 bytes of base64: " + std::string(text));
  }
  return out;
}

}  // namespace hometunnel::wgtun
