#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "plsteg/image.hpp"
#include "plsteg/pls.hpp"

namespace plsteg {

/// Channels of a triad that carry bits. The ninth (blue of the third pixel)
/// is never read or written.
constexpr std::size_t kBitsPerCharacter = 8;

/// Forces the parity of `value` to `bit`. Mismatches are fixed by
/// decrementing, except 0 which becomes 1.
constexpr std::uint8_t set_parity(std::uint8_t value, bool bit) noexcept {
  if (static_cast<bool>(value & 1U) == bit) return value;
  return value == 0 ? std::uint8_t{1} : static_cast<std::uint8_t>(value - 1);
}

/// Payload text paired with the PLS that places it.
class EmbedPlan {
 public:
  /// Throws InvalidHexDigit for a non [0-9a-f] payload and CapacityExceeded
  /// for an empty payload or a PLS that is not exactly 3x its length.
  EmbedPlan(std::string payload, PixelLocatorSequence pls);

  const std::string& payload() const noexcept { return payload_; }
  const PixelLocatorSequence& pls() const noexcept { return pls_; }

 private:
  std::string payload_;
  PixelLocatorSequence pls_;
};

/// Writes each character's 8-bit code, MSB first, into the parities of the
/// r,g,b,r,g,b,r,g channels of its triad. Returns a modified copy.
/// Throws InvalidPls if the PLS does not validate against the cover,
/// CapacityExceeded if it is larger than the image.
ImageMatrix embed(const ImageMatrix& cover, const EmbedPlan& plan);
ImageMatrix embed(const ImageMatrix& cover, const PixelLocatorSequence& pls,
                  std::string_view payload);

/// Reads one character per triad until the PLS is exhausted. Returns raw
/// characters; no hex validation happens here.
std::string extract(const ImageMatrix& stego, const PixelLocatorSequence& pls);

/// Maximum number of characters the image can hold.
constexpr std::size_t capacity(std::size_t pixel_count) noexcept {
  return pixel_count / kPixelsPerCharacter;
}
inline std::size_t capacity(const ImageMatrix& image) noexcept {
  return capacity(image.pixel_count());
}

}  // namespace plsteg
