#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace plsteg {

using PixelIndex = std::uint32_t;

/// Ordered list of distinct linear pixel indices. Every group of three
/// consecutive entries carries one embedded character.
struct PixelLocatorSequence {
  std::vector<PixelIndex> indices;

  std::size_t size() const noexcept { return indices.size(); }
  friend bool operator==(const PixelLocatorSequence&, const PixelLocatorSequence&) = default;
};

constexpr std::size_t kPixelsPerCharacter = 3;

/// Pixels needed to embed `message_length` characters (three per character).
/// Throws Error(CapacityExceeded) for a zero length.
std::size_t required_pixels(std::size_t message_length);

/// Returns a uniform integer in [0, bound); bound >= 1.
using BoundedDraw = std::function<std::uint64_t(std::uint64_t bound)>;

/// Partial Fisher-Yates over [0, total_pixels): step i swaps slot
/// total_pixels-1-i with a uniformly drawn slot in [0, total_pixels-i) and
/// emits the value that lands in the former. Only touched slots are stored,
/// so memory is O(needed) regardless of image size.
PixelLocatorSequence partial_shuffle(std::size_t total_pixels, std::size_t needed,
                                     const BoundedDraw& draw);

/// Seeded mt19937_64 with rejection sampling for unbiased bounded draws.
class SeededDraw {
 public:
  explicit SeededDraw(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t operator()(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

PixelLocatorSequence generate_pls(std::size_t total_pixels, std::size_t needed,
                                  std::uint64_t seed);

enum class PlsIssueKind { DuplicateIndex, IndexOutOfRange, BadLength };

struct PlsIssue {
  PlsIssueKind kind;
  std::size_t position;

  friend bool operator==(const PlsIssue&, const PlsIssue&) = default;
};

struct PlsVerdict {
  std::vector<PlsIssue> issues;

  bool valid() const noexcept { return issues.empty(); }
  explicit operator bool() const noexcept { return valid(); }
  std::string describe() const;
};

/// Accepts iff indices are distinct, all below total_pixels, and the length
/// is a positive multiple of three. Duplicates are reported at the second
/// occurrence; BadLength is reported at position = length.
PlsVerdict validate_pls(const PixelLocatorSequence& pls, std::size_t total_pixels);

/// "PLS1" | u32be count | count x u32be index.
std::vector<std::uint8_t> serialize_pls(const PixelLocatorSequence& pls);

/// Throws Error(MalformedPls) on bad magic, truncation or trailing bytes.
PixelLocatorSequence deserialize_pls(std::span<const std::uint8_t> bytes);

/// Manual entry: one decimal index per line. Blank lines are ignored.
/// Throws Error(InvalidPls) on anything else.
PixelLocatorSequence parse_manual_pls(const std::string& text);
PixelLocatorSequence read_manual_pls(const std::filesystem::path& path);

}  // namespace plsteg
