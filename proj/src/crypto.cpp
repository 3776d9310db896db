#include "plsteg/crypto.hpp"

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <algorithm>
#include <memory>

#include "plsteg/error.hpp"

namespace plsteg {

namespace {

using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, decltype(&EVP_CIPHER_CTX_free)>;

CipherCtx new_ctx() {
  CipherCtx ctx(EVP_CIPHER_CTX_new(), &EVP_CIPHER_CTX_free);
  if (!ctx) throw Error(ErrorCode::CryptoFailure, "cannot allocate cipher context");
  return ctx;
}

// Runs one EVP pass. With padding disabled the input must be block aligned.
Bytes run_cipher(const EVP_CIPHER* cipher, bool encrypt, bool padding, const Key256& key,
                 const std::uint8_t* iv, std::span<const std::uint8_t> input) {
  CipherCtx ctx = new_ctx();
  if (EVP_CipherInit_ex(ctx.get(), cipher, nullptr, key.bytes().data(), iv, encrypt ? 1 : 0) != 1 ||
      EVP_CIPHER_CTX_set_padding(ctx.get(), padding ? 1 : 0) != 1) {
    throw Error(ErrorCode::CryptoFailure, "cipher initialisation failed");
  }
  Bytes out(input.size() + kBlockSize);
  int produced = 0;
  if (EVP_CipherUpdate(ctx.get(), out.data(), &produced, input.data(),
                       static_cast<int>(input.size())) != 1) {
    throw Error(ErrorCode::CryptoFailure, "cipher update failed");
  }
  int tail = 0;
  if (EVP_CipherFinal_ex(ctx.get(), out.data() + produced, &tail) != 1) {
    // Only reachable on decrypt: the final block's padding did not verify.
    throw Error(ErrorCode::BadPadding, "decryption failed");
  }
  out.resize(static_cast<std::size_t>(produced + tail));
  return out;
}

template <std::size_t N>
std::array<std::uint8_t, N> random_array() {
  std::array<std::uint8_t, N> out{};
  if (RAND_bytes(out.data(), static_cast<int>(N)) != 1) {
    throw Error(ErrorCode::CryptoFailure, "system entropy source unavailable");
  }
  return out;
}

Envelope seal_bytes(std::span<const std::uint8_t> plaintext, std::string_view passphrase,
                    const Salt& salt, const Iv& iv) {
  const Key256 key = derive_key(passphrase, salt);
  return Envelope{salt, iv, aes256_cbc_encrypt(key, iv, plaintext)};
}

Bytes open_bytes(const Envelope& envelope, std::string_view passphrase) {
  const Key256 key = derive_key(passphrase, envelope.salt);
  return aes256_cbc_decrypt(key, envelope.iv, envelope.ciphertext);
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

}  // namespace

Key256 Key256::from_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kSize) throw Error(ErrorCode::CryptoFailure, "AES-256 keys are 32 bytes");
  std::array<std::uint8_t, kSize> raw{};
  std::copy(bytes.begin(), bytes.end(), raw.begin());
  return Key256(raw);
}

Key256 derive_key(std::string_view passphrase, const Salt& salt) {
  if (passphrase.empty()) throw Error(ErrorCode::EmptyPassphrase, "passphrase must not be empty");
  std::array<std::uint8_t, Key256::kSize> out{};
  if (PKCS5_PBKDF2_HMAC(passphrase.data(), static_cast<int>(passphrase.size()), salt.data(),
                        static_cast<int>(salt.size()), static_cast<int>(kPbkdf2Iterations),
                        EVP_sha256(), static_cast<int>(out.size()), out.data()) != 1) {
    throw Error(ErrorCode::CryptoFailure, "key derivation failed");
  }
  return Key256(out);
}

Block aes256_encrypt_block(const Key256& key, const Block& plaintext) {
  const Bytes out = run_cipher(EVP_aes_256_ecb(), true, false, key, nullptr, plaintext);
  Block block{};
  std::copy_n(out.begin(), kBlockSize, block.begin());
  return block;
}

Block aes256_decrypt_block(const Key256& key, const Block& ciphertext) {
  const Bytes out = run_cipher(EVP_aes_256_ecb(), false, false, key, nullptr, ciphertext);
  Block block{};
  std::copy_n(out.begin(), kBlockSize, block.begin());
  return block;
}

Bytes aes256_cbc_encrypt(const Key256& key, const Iv& iv, std::span<const std::uint8_t> plaintext) {
  return run_cipher(EVP_aes_256_cbc(), true, true, key, iv.data(), plaintext);
}

Bytes aes256_cbc_decrypt(const Key256& key, const Iv& iv, std::span<const std::uint8_t> ciphertext) {
  if (ciphertext.empty() || ciphertext.size() % kBlockSize != 0) {
    throw Error(ErrorCode::BadPadding, "decryption failed");
  }
  return run_cipher(EVP_aes_256_cbc(), false, true, key, iv.data(), ciphertext);
}

Bytes Envelope::to_bytes() const {
  Bytes out;
  out.reserve(kEnvelopeHeaderSize + ciphertext.size());
  out.insert(out.end(), salt.begin(), salt.end());
  out.insert(out.end(), iv.begin(), iv.end());
  out.insert(out.end(), ciphertext.begin(), ciphertext.end());
  return out;
}

Envelope Envelope::from_bytes(std::span<const std::uint8_t> bytes, ErrorCode code) {
  if (bytes.size() < kEnvelopeHeaderSize + kBlockSize ||
      (bytes.size() - kEnvelopeHeaderSize) % kBlockSize != 0) {
    throw Error(code, "sealed data has an invalid length (" + std::to_string(bytes.size()) + " bytes)");
  }
  Envelope env;
  std::copy_n(bytes.begin(), kSaltSize, env.salt.begin());
  std::copy_n(bytes.begin() + kSaltSize, kIvSize, env.iv.begin());
  env.ciphertext.assign(bytes.begin() + kEnvelopeHeaderSize, bytes.end());
  return env;
}

SealedPayload SealedPayload::from_bytes(std::span<const std::uint8_t> bytes) {
  return {Envelope::from_bytes(bytes, ErrorCode::BadPadding)};
}

PlsKeyFile PlsKeyFile::from_bytes(std::span<const std::uint8_t> bytes) {
  return {Envelope::from_bytes(bytes, ErrorCode::MalformedPls)};
}

Salt random_salt() { return random_array<kSaltSize>(); }
Iv random_iv() { return random_array<kIvSize>(); }

SealedPayload seal(std::span<const std::uint8_t> plaintext, std::string_view passphrase) {
  return seal(plaintext, passphrase, random_salt(), random_iv());
}

SealedPayload seal(std::span<const std::uint8_t> plaintext, std::string_view passphrase,
                   const Salt& salt, const Iv& iv) {
  if (plaintext.empty()) throw Error(ErrorCode::EmptyPlaintext, "nothing to seal");
  return {seal_bytes(plaintext, passphrase, salt, iv)};
}

Bytes unseal(const SealedPayload& sealed, std::string_view passphrase) {
  return open_bytes(sealed.envelope, passphrase);
}

PlsKeyFile seal_pls(const PixelLocatorSequence& pls, std::string_view passphrase) {
  return seal_pls(pls, passphrase, random_salt(), random_iv());
}

PlsKeyFile seal_pls(const PixelLocatorSequence& pls, std::string_view passphrase, const Salt& salt,
                    const Iv& iv) {
  return {seal_bytes(serialize_pls(pls), passphrase, salt, iv)};
}

PixelLocatorSequence open_pls(const PlsKeyFile& file, std::string_view passphrase) {
  const Bytes plain = open_bytes(file.envelope, passphrase);
  if (plain.size() < 4 || !std::equal(plain.begin(), plain.begin() + 4, "PLS1")) {
    throw Error(ErrorCode::BadPadding, "decryption failed");
  }
  return deserialize_pls(plain);
}

std::size_t sealed_hex_length(std::size_t plaintext_size) {
  const std::size_t ciphertext = (plaintext_size / kBlockSize + 1) * kBlockSize;
  return 2 * (kEnvelopeHeaderSize + ciphertext);
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (const std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0F]);
  }
  return out;
}

Bytes from_hex(std::string_view text) {
  if (text.size() % 2 != 0) throw Error(ErrorCode::OddLength, "hex text has odd length");
  Bytes out;
  out.reserve(text.size() / 2);
  for (std::size_t i = 0; i < text.size(); i += 2) {
    const int hi = hex_value(text[i]);
    const int lo = hex_value(text[i + 1]);
    if (hi < 0 || lo < 0) {
      throw Error(ErrorCode::InvalidHexDigit,
                  "invalid hex digit at offset " + std::to_string(hi < 0 ? i : i + 1));
    }
    out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
  }
  return out;
}

Bytes as_bytes(std::string_view text) { return {text.begin(), text.end()}; }

}  // namespace plsteg
