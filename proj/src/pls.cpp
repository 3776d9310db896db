#include "plsteg/pls.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "plsteg/error.hpp"

namespace plsteg {

namespace {

constexpr std::uint8_t kMagic[4] = {'P', 'L', 'S', '1'};

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t get_be32(std::span<const std::uint8_t> in, std::size_t at) {
  return (static_cast<std::uint32_t>(in[at]) << 24) | (static_cast<std::uint32_t>(in[at + 1]) << 16) |
         (static_cast<std::uint32_t>(in[at + 2]) << 8) | static_cast<std::uint32_t>(in[at + 3]);
}

const char* kind_name(PlsIssueKind kind) {
  switch (kind) {
    case PlsIssueKind::DuplicateIndex: return "duplicate index";
    case PlsIssueKind::IndexOutOfRange: return "index out of range";
    case PlsIssueKind::BadLength: return "length is not a positive multiple of 3";
  }
  return "?";
}

}  // namespace

std::size_t required_pixels(std::size_t message_length) {
  if (message_length == 0) {
    throw Error(ErrorCode::CapacityExceeded, "message length must be at least 1");
  }
  return kPixelsPerCharacter * message_length;
}

std::uint64_t SeededDraw::operator()(std::uint64_t bound) {
  // Reject the top partial bucket so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

PixelLocatorSequence partial_shuffle(std::size_t total_pixels, std::size_t needed,
                                     const BoundedDraw& draw) {
  if (needed == 0 || needed > total_pixels) {
    throw Error(ErrorCode::CapacityExceeded,
                "cannot pick " + std::to_string(needed) + " distinct pixels from " +
                    std::to_string(total_pixels));
  }
  if (total_pixels - 1 > std::numeric_limits<PixelIndex>::max()) {
    throw Error(ErrorCode::CapacityExceeded, "image too large for 32-bit pixel indices");
  }

  // Sparse view of arr[]: absent slots still hold their own index.
  std::unordered_map<std::size_t, std::size_t> moved;
  moved.reserve(2 * needed);
  auto value_at = [&moved](std::size_t slot) {
    const auto it = moved.find(slot);
    return it == moved.end() ? slot : it->second;
  };

  PixelLocatorSequence pls;
  pls.indices.reserve(needed);
  for (std::size_t i = 0; i < needed; ++i) {
    const std::size_t last = total_pixels - 1 - i;
    const auto pick = static_cast<std::size_t>(draw(total_pixels - i));
    if (pick > last) throw Error(ErrorCode::IndexOutOfRange, "bounded draw returned an out-of-range value");
    const std::size_t picked_value = value_at(pick);
    moved[pick] = value_at(last);
    moved[last] = picked_value;
    pls.indices.push_back(static_cast<PixelIndex>(picked_value));
  }
  return pls;
}

PixelLocatorSequence generate_pls(std::size_t total_pixels, std::size_t needed, std::uint64_t seed) {
  SeededDraw draw(seed);
  return partial_shuffle(total_pixels, needed, std::ref(draw));
}

std::string PlsVerdict::describe() const {
  if (issues.empty()) return "valid";
  std::ostringstream out;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i) out << "; ";
    out << kind_name(issues[i].kind) << " at position " << issues[i].position;
  }
  return out.str();
}

PlsVerdict validate_pls(const PixelLocatorSequence& pls, std::size_t total_pixels) {
  PlsVerdict verdict;
  std::unordered_set<PixelIndex> seen;
  seen.reserve(pls.size());
  for (std::size_t pos = 0; pos < pls.size(); ++pos) {
    const PixelIndex index = pls.indices[pos];
    if (index >= total_pixels) {
      verdict.issues.push_back({PlsIssueKind::IndexOutOfRange, pos});
    } else if (!seen.insert(index).second) {
      verdict.issues.push_back({PlsIssueKind::DuplicateIndex, pos});
    }
  }
  if (pls.size() == 0 || pls.size() % kPixelsPerCharacter != 0) {
    verdict.issues.push_back({PlsIssueKind::BadLength, pls.size()});
  }
  return verdict;
}

std::vector<std::uint8_t> serialize_pls(const PixelLocatorSequence& pls) {
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  out.reserve(8 + 4 * pls.size());
  put_be32(out, static_cast<std::uint32_t>(pls.size()));
  for (const PixelIndex index : pls.indices) put_be32(out, index);
  return out;
}

PixelLocatorSequence deserialize_pls(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    throw Error(ErrorCode::MalformedPls, "PLS data is missing the PLS1 header");
  }
  const std::uint32_t count = get_be32(bytes, 4);
  if ((bytes.size() - 8) / 4 != count || (bytes.size() - 8) % 4 != 0) {
    throw Error(ErrorCode::MalformedPls, "PLS data length does not match its index count");
  }
  PixelLocatorSequence pls;
  pls.indices.reserve(count);
  for (std::size_t i = 0; i < count; ++i) pls.indices.push_back(get_be32(bytes, 8 + 4 * i));
  return pls;
}

PixelLocatorSequence parse_manual_pls(const std::string& text) {
  PixelLocatorSequence pls;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const char* begin = line.data() + first;
    const char* end = line.data() + last + 1;
    PixelIndex value = 0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
      throw Error(ErrorCode::InvalidPls, "manual PLS line " + std::to_string(line_no) +
                                             " is not a non-negative decimal index");
    }
    pls.indices.push_back(value);
  }
  return pls;
}

PixelLocatorSequence read_manual_pls(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read manual PLS " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_manual_pls(text.str());
}

}  // namespace plsteg
