#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hometunnel::wgtun {

using Key32 = std::array<std::uint8_t, 32>;
using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Primitives the handshake and transport are built from. Implementations
/// must be stateless and safe to share between devices.
class CryptoSuite {
public:
  static constexpr std::size_t kTagSize = 16;

  virtual ~CryptoSuite() = default;

  /// Applies the suite's private-key convention (Curve25519 clamping) to raw bytes.
  [[nodiscard]] virtual Key32 clamp(Key32 raw) const = 0;
  [[nodiscard]] virtual Key32 public_key(const Key32& private_key) const = 0;
  /// Empty on a degenerate (all-zero) shared secret.
  [[nodiscard]] virtual std::optional<Key32> agree(const Key32& private_key, const Key32& peer_public) const = 0;

  /// Ciphertext is plaintext.size() + kTagSize bytes.
  [[nodiscard]] virtual Bytes seal(const Key32& key, std::uint64_t nonce, ByteView plaintext,
                                   ByteView associated) const = 0;
  [[nodiscard]] virtual std::optional<Bytes> open(const Key32& key, std::uint64_t nonce, ByteView ciphertext,
                                                  ByteView associated) const = 0;

  [[nodiscard]] virtual Key32 hash(ByteView data) const = 0;
  [[nodiscard]] virtual Key32 mac(const Key32& key, ByteView data) const = 0;
};

/// X25519, ChaCha20-Poly1305 (IETF), BLAKE2b-256 and HMAC-SHA-256 from libsodium.
class SodiumSuite final : public CryptoSuite {
public:
  SodiumSuite();

  [[nodiscard]] Key32 clamp(Key32 raw) const override;
  [[nodiscard]] Key32 public_key(const Key32& private_key) const override;
  [[nodiscard]] std::optional<Key32> agree(const Key32& private_key, const Key32& peer_public) const override;
  [[nodiscard]] Bytes seal(const Key32& key, std::uint64_t nonce, ByteView plaintext,
                           ByteView associated) const override;
  [[nodiscard]] std::optional<Bytes> open(const Key32& key, std::uint64_t nonce, ByteView ciphertext,
                                          ByteView associated) const override;
  [[nodiscard]] Key32 hash(ByteView data) const override;
  [[nodiscard]] Key32 mac(const Key32& key, ByteView data) const override;
};

[[nodiscard]] std::shared_ptr<const CryptoSuite> default_suite();

/// HKDF-style expansion: t0 = mac(key, input); t1 = mac(t0, 0x01);
/// ti = mac(t0, t(i-1) || i).
[[nodiscard]] std::array<Key32, 3> kdf3(const CryptoSuite& suite, const Key32& key, ByteView input);

[[nodiscard]] Key32 hash_concat(const CryptoSuite& suite, ByteView a, ByteView b);

[[nodiscard]] std::string to_base64(ByteView data);
/// Throws std::invalid_argument unless `text` decodes to exactly 32 bytes.
[[nodiscard]] Key32 key_from_base64(std::string_view text);

}  // namespace hometunnel::wgtun
