#pragma once

// Deterministic stand-in crypto: discrete-log DH modulo 2^61 - 1, an XOR
// keystream and a hash tag. Not secure; only the protocol shape matters.

#include <cstring>

#include "hometunnel/wgtun/suite.hpp"

namespace ref {

using hometunnel::wgtun::ByteView;
using hometunnel::wgtun::Bytes;
using hometunnel::wgtun::Key32;

class ToySuite final : public hometunnel::wgtun::CryptoSuite {
public:
  static constexpr std::uint64_t kP = (std::uint64_t{1} << 61) - 1;
  static constexpr std::uint64_t kG = 37;

  Key32 clamp(Key32 raw) const override {
    raw[7] &= 0x0f;
    raw[0] |= 1;
    std::fill(raw.begin() + 8, raw.end(), 0);
    return raw;
  }
  Key32 public_key(const Key32& priv) const override { return encode(powmod(kG, scalar(priv))); }
  std::optional<Key32> agree(const Key32& priv, const Key32& pub) const override {
    const auto base = scalar(pub) % kP;
    if (base == 0) return std::nullopt;
    return encode(powmod(base, scalar(priv)));
  }
  Bytes seal(const Key32& key, std::uint64_t nonce, ByteView pt, ByteView ad) const override {
    Bytes out(pt.begin(), pt.end());
    xor_stream(key, nonce, out);
    const auto t = tag(key, nonce, out, ad);
    out.insert(out.end(), t.begin(), t.begin() + kTagSize);
    return out;
  }
  std::optional<Bytes> open(const Key32& key, std::uint64_t nonce, ByteView ct, ByteView ad) const override {
    if (ct.size() < kTagSize) return std::nullopt;
    Bytes body(ct.begin(), ct.end() - kTagSize);
    const auto t = tag(key, nonce, body, ad);
    if (!std::equal(t.begin(), t.begin() + kTagSize, ct.end() - kTagSize)) return std::nullopt;
    xor_stream(key, nonce, body);
    return body;
  }
  Key32 hash(ByteView data) const override {
    Key32 out{};
    for (int lane = 0; lane < 4; ++lane) {
      std::uint64_t h = 0xcbf29ce484222325ull ^ (0x9e3779b97f4a7c15ull * (lane + 1));
      for (auto b : data) {
        h ^= b;
        h *= 0x100000001b3ull;
        h ^= h >> 29;
      }
      for (int i = 0; i < 8; ++i) out[lane * 8 + i] = static_cast<std::uint8_t>(h >> (8 * i));
    }
    return out;
  }
  Key32 mac(const Key32& key, ByteView data) const override {
    Bytes buf(key.begin(), key.end());
    buf.insert(buf.end(), data.begin(), data.end());
    return hash(buf);
  }

private:
  static std::uint64_t scalar(const Key32& k) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | k[i];
    return v;
  }
  static Key32 encode(std::uint64_t v) {
    Key32 out{};
    for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * i));
    return out;
  }
  static std::uint64_t powmod(std::uint64_t b, std::uint64_t e) {
    unsigned __int128 r = 1, x = b % kP;
    while (e) {
      if (e & 1) r = r * x % kP;
      x = x * x % kP;
      e >>= 1;
    }
    return static_cast<std::uint64_t>(r);
  }
  void xor_stream(const Key32& key, std::uint64_t nonce, Bytes& data) const {
    for (std::size_t block = 0; block * 32 < data.size(); ++block) {
      Bytes seed(key.begin(), key.end());
      for (int i = 0; i < 8; ++i) seed.push_back(static_cast<std::uint8_t>(nonce >> (8 * i)));
      for (int i = 0; i < 8; ++i) seed.push_back(static_cast<std::uint8_t>(block >> (8 * i)));
      const auto ks = hash(seed);
      for (std::size_t i = 0; i < 32 && block * 32 + i < data.size(); ++i) data[block * 32 + i] ^= ks[i];
    }
  }
  Key32 tag(const Key32& key, std::uint64_t nonce, ByteView body, ByteView ad) const {
    Bytes buf(key.begin(), key.end());
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<std::uint8_t>(nonce >> (8 * i)));
    buf.insert(buf.end(), ad.begin(), ad.end());
    buf.push_back(0xff);
    buf.insert(buf.end(), body.begin(), body.end());
    return hash(buf);
  }
};

}  // namespace ref
