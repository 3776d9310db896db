#include "plsteg/codec.hpp"

#include <array>

#include "plsteg/error.hpp"

namespace plsteg {

namespace {

bool is_hex_char(char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); }

// The eight carrier channels of a triad, in bit order (MSB first).
std::array<std::uint8_t*, kBitsPerCharacter> carrier_channels(Pixel& p0, Pixel& p1, Pixel& p2) {
  return {&p0.r, &p0.g, &p0.b, &p1.r, &p1.g, &p1.b, &p2.r, &p2.g};
}

std::array<std::uint8_t, kBitsPerCharacter> carrier_values(const Pixel& p0, const Pixel& p1,
                                                           const Pixel& p2) {
  return {p0.r, p0.g, p0.b, p1.r, p1.g, p1.b, p2.r, p2.g};
}

void require_usable(const PixelLocatorSequence& pls, const ImageMatrix& image) {
  const PlsVerdict verdict = validate_pls(pls, image.pixel_count());
  if (!verdict) throw Error(ErrorCode::InvalidPls, "PLS rejected: " + verdict.describe());
}

}  // namespace

EmbedPlan::EmbedPlan(std::string payload, PixelLocatorSequence pls)
    : payload_(std::move(payload)), pls_(std::move(pls)) {
  if (payload_.empty()) throw Error(ErrorCode::CapacityExceeded, "payload is empty");
  for (std::size_t i = 0; i < payload_.size(); ++i) {
    if (!is_hex_char(payload_[i])) {
      throw Error(ErrorCode::InvalidHexDigit, "payload character at offset " + std::to_string(i) +
                                                  " is not a lowercase hex digit");
    }
  }
  if (pls_.size() != required_pixels(payload_.size())) {
    throw Error(ErrorCode::CapacityExceeded,
                "payload of " + std::to_string(payload_.size()) + " characters needs " +
                    std::to_string(required_pixels(payload_.size())) + " PLS entries, got " +
                    std::to_string(pls_.size()));
  }
}

ImageMatrix embed(const ImageMatrix& cover, const EmbedPlan& plan) {
  const PixelLocatorSequence& pls = plan.pls();
  if (pls.size() > cover.pixel_count()) {
    throw Error(ErrorCode::CapacityExceeded,
                "PLS needs " + std::to_string(pls.size()) + " pixels but the image has " +
                    std::to_string(cover.pixel_count()));
  }
  require_usable(pls, cover);

  ImageMatrix stego = cover;
  const std::string& payload = plan.payload();
  for (std::size_t k = 0; k < payload.size(); ++k) {
    const auto code = static_cast<std::uint8_t>(payload[k]);
    const auto channels = carrier_channels(stego.at_index(pls.indices[3 * k]),
                                           stego.at_index(pls.indices[3 * k + 1]),
                                           stego.at_index(pls.indices[3 * k + 2]));
    for (std::size_t j = 0; j < kBitsPerCharacter; ++j) {
      const bool bit = (code >> (kBitsPerCharacter - 1 - j)) & 1U;
      *channels[j] = set_parity(*channels[j], bit);
    }
  }
  return stego;
}

ImageMatrix embed(const ImageMatrix& cover, const PixelLocatorSequence& pls, std::string_view payload) {
  return embed(cover, EmbedPlan(std::string(payload), pls));
}

std::string extract(const ImageMatrix& stego, const PixelLocatorSequence& pls) {
  if (pls.size() % kPixelsPerCharacter != 0) {
    throw Error(ErrorCode::InvalidPls, "PLS length must be a multiple of 3");
  }
  std::string out;
  out.reserve(pls.size() / kPixelsPerCharacter);
  for (std::size_t k = 0; k + 2 < pls.size(); k += kPixelsPerCharacter) {
    const auto values = carrier_values(stego.at_index(pls.indices[k]), stego.at_index(pls.indices[k + 1]),
                                       stego.at_index(pls.indices[k + 2]));
    unsigned code = 0;
    for (const std::uint8_t v : values) code = (code << 1) | (v & 1U);
    out.push_back(static_cast<char>(code));
  }
  return out;
}

}  // namespace plsteg
