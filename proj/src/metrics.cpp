#include "plsteg/metrics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "plsteg/error.hpp"

namespace plsteg {

namespace {

void require_same_shape(const ImageMatrix& a, const ImageMatrix& b) {
  if (a.height() != b.height() || a.width() != b.width()) {
    throw Error(ErrorCode::DimensionMismatch,
                "images differ in size: " + std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                    " vs " + std::to_string(b.width()) + "x" + std::to_string(b.height()));
  }
}

std::uint8_t channel_of(const Pixel& p, Channel c) {
  switch (c) {
    case Channel::R: return p.r;
    case Channel::G: return p.g;
    case Channel::B: return p.b;
  }
  return 0;
}

}  // namespace

char channel_name(Channel channel) noexcept {
  switch (channel) {
    case Channel::R: return 'r';
    case Channel::G: return 'g';
    case Channel::B: return 'b';
  }
  return '?';
}

double mse(const ImageMatrix& reference, const ImageMatrix& distorted) {
  require_same_shape(reference, distorted);
  std::uint64_t sum = 0;
  const auto a = reference.pixels();
  const auto b = distorted.pixels();
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (const Channel c : kChannels) {
      const int d = int{channel_of(a[i], c)} - int{channel_of(b[i], c)};
      sum += static_cast<std::uint64_t>(d * d);
    }
  }
  return static_cast<double>(sum) / (3.0 * static_cast<double>(a.size()));
}

double psnr_from_mse(double mse_value) {
  if (mse_value <= 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(kMaxChannelValue / std::sqrt(mse_value));
}

double psnr(const ImageMatrix& reference, const ImageMatrix& distorted) {
  return psnr_from_mse(mse(reference, distorted));
}

std::uint64_t ChannelHistogram::total() const noexcept {
  std::uint64_t sum = 0;
  for (const auto count : bins) sum += count;
  return sum;
}

ChannelHistogram histogram(const ImageMatrix& image, Channel channel) {
  ChannelHistogram h;
  h.channel = channel;
  for (const Pixel& p : image.pixels()) ++h.bins[channel_of(p, channel)];
  return h;
}

std::uint64_t l1_distance(const ChannelHistogram& a, const ChannelHistogram& b) noexcept {
  std::uint64_t sum = 0;
  for (std::size_t v = 0; v < a.bins.size(); ++v) {
    sum += a.bins[v] > b.bins[v] ? a.bins[v] - b.bins[v] : b.bins[v] - a.bins[v];
  }
  return sum;
}

std::string QualityReport::to_json() const {
  nlohmann::ordered_json j;
  j["mse"] = mse;
  if (std::isinf(psnr_db)) {
    j["psnr_db"] = "inf";
  } else {
    j["psnr_db"] = psnr_db;
  }
  j["width"] = width;
  j["height"] = height;
  return j.dump();
}

std::string ComparisonReport::histogram_csv(Channel channel) const {
  const auto plane = static_cast<std::size_t>(channel);
  std::ostringstream out;
  for (std::size_t v = 0; v < 256; ++v) {
    out << v << ',' << cover[plane].bins[v] << ',' << stego[plane].bins[v] << '\n';
  }
  return out.str();
}

ComparisonReport compare_report(const ImageMatrix& cover, const ImageMatrix& stego) {
  ComparisonReport report;
  report.quality.mse = mse(cover, stego);
  report.quality.psnr_db = psnr_from_mse(report.quality.mse);
  report.quality.width = cover.width();
  report.quality.height = cover.height();
  for (const Channel c : kChannels) {
    report.cover[static_cast<std::size_t>(c)] = histogram(cover, c);
    report.stego[static_cast<std::size_t>(c)] = histogram(stego, c);
  }
  return report;
}

}  // namespace plsteg
