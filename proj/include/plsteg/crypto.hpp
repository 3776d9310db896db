#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "plsteg/error.hpp"
#include "plsteg/pls.hpp"

namespace plsteg {

using Bytes = std::vector<std::uint8_t>;
using Salt = std::array<std::uint8_t, 16>;
using Iv = std::array<std::uint8_t, 16>;
using Block = std::array<std::uint8_t, 16>;

constexpr std::size_t kSaltSize = 16;
constexpr std::size_t kIvSize = 16;
constexpr std::size_t kBlockSize = 16;
constexpr std::size_t kEnvelopeHeaderSize = kSaltSize + kIvSize;
constexpr unsigned kPbkdf2Iterations = 100000;

/// 256-bit AES key.
class Key256 {
 public:
  static constexpr std::size_t kSize = 32;

  explicit Key256(const std::array<std::uint8_t, kSize>& bytes) : bytes_(bytes) {}
  /// Throws Error(CryptoFailure) unless exactly 32 bytes.
  static Key256 from_bytes(std::span<const std::uint8_t> bytes);

  std::span<const std::uint8_t, kSize> bytes() const noexcept { return bytes_; }
  friend bool operator==(const Key256&, const Key256&) = default;

 private:
  std::array<std::uint8_t, kSize> bytes_;
};

/// PBKDF2-HMAC-SHA256, 100000 iterations, 32-byte output.
Key256 derive_key(std::string_view passphrase, const Salt& salt);

/// Single-block AES-256 forward/inverse cipher.
Block aes256_encrypt_block(const Key256& key, const Block& plaintext);
Block aes256_decrypt_block(const Key256& key, const Block& ciphertext);

/// AES-256-CBC with PKCS#7 padding. Decryption throws Error(BadPadding) when
/// the padding does not verify.
Bytes aes256_cbc_encrypt(const Key256& key, const Iv& iv, std::span<const std::uint8_t> plaintext);
Bytes aes256_cbc_decrypt(const Key256& key, const Iv& iv, std::span<const std::uint8_t> ciphertext);

/// salt | iv | ciphertext, the common shape of everything this module seals.
struct Envelope {
  Salt salt{};
  Iv iv{};
  Bytes ciphertext;

  Bytes to_bytes() const;
  /// Throws Error(code) if shorter than header + one block or the ciphertext
  /// is not a whole number of blocks.
  static Envelope from_bytes(std::span<const std::uint8_t> bytes, ErrorCode code);

  friend bool operator==(const Envelope&, const Envelope&) = default;
};

/// The sealed secret message. Embedded in the image as to_hex(to_bytes()).
struct SealedPayload {
  Envelope envelope;

  Bytes to_bytes() const { return envelope.to_bytes(); }
  static SealedPayload from_bytes(std::span<const std::uint8_t> bytes);

  friend bool operator==(const SealedPayload&, const SealedPayload&) = default;
};

/// The sealed PLS as stored on disk: salt(16) | iv(16) | ciphertext(16k).
struct PlsKeyFile {
  Envelope envelope;

  Bytes to_bytes() const { return envelope.to_bytes(); }
  static PlsKeyFile from_bytes(std::span<const std::uint8_t> bytes);

  friend bool operator==(const PlsKeyFile&, const PlsKeyFile&) = default;
};

Salt random_salt();
Iv random_iv();

SealedPayload seal(std::span<const std::uint8_t> plaintext, std::string_view passphrase);
SealedPayload seal(std::span<const std::uint8_t> plaintext, std::string_view passphrase,
                   const Salt& salt, const Iv& iv);
Bytes unseal(const SealedPayload& sealed, std::string_view passphrase);

PlsKeyFile seal_pls(const PixelLocatorSequence& pls, std::string_view passphrase);
PlsKeyFile seal_pls(const PixelLocatorSequence& pls, std::string_view passphrase,
                    const Salt& salt, const Iv& iv);
/// A wrong passphrase surfaces as BadPadding, including the rare case where
/// the padding happens to verify but the decrypted magic does not.
PixelLocatorSequence open_pls(const PlsKeyFile& file, std::string_view passphrase);

/// Hex length of a sealed payload for a plaintext of `plaintext_size` bytes.
std::size_t sealed_hex_length(std::size_t plaintext_size);

std::string to_hex(std::span<const std::uint8_t> bytes);
/// Lowercase only, matching to_hex. Throws OddLength / InvalidHexDigit.
Bytes from_hex(std::string_view text);

Bytes as_bytes(std::string_view text);

}  // namespace plsteg
