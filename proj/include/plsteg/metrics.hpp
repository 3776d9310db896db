#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>

#include "plsteg/image.hpp"

namespace plsteg {

constexpr double kMaxChannelValue = 255.0;

enum class Channel { R, G, B };

constexpr std::array<Channel, 3> kChannels{Channel::R, Channel::G, Channel::B};
char channel_name(Channel channel) noexcept;

/// Mean squared error over all 3*width*height channel samples.
/// Throws Error(DimensionMismatch).
double mse(const ImageMatrix& reference, const ImageMatrix& distorted);

/// 20*log10(255/sqrt(mse)); +infinity when mse == 0.
double psnr_from_mse(double mse_value);
double psnr(const ImageMatrix& reference, const ImageMatrix& distorted);

struct ChannelHistogram {
  Channel channel = Channel::R;
  std::array<std::uint64_t, 256> bins{};

  std::uint64_t total() const noexcept;
};

ChannelHistogram histogram(const ImageMatrix& image, Channel channel);

/// Sum over values of |a[v] - b[v]|.
std::uint64_t l1_distance(const ChannelHistogram& a, const ChannelHistogram& b) noexcept;

struct QualityReport {
  double mse = 0.0;
  double psnr_db = 0.0;  // +infinity for identical images
  std::size_t width = 0;
  std::size_t height = 0;
  double max_i = kMaxChannelValue;

  bool lossless() const noexcept { return mse == 0.0; }
  /// {"mse": float, "psnr_db": float|"inf", "width": int, "height": int}
  std::string to_json() const;
};

struct ComparisonReport {
  QualityReport quality;
  std::array<ChannelHistogram, 3> cover;
  std::array<ChannelHistogram, 3> stego;

  /// 256 lines of "value,cover_count,stego_count", no header.
  std::string histogram_csv(Channel channel) const;
};

ComparisonReport compare_report(const ImageMatrix& cover, const ImageMatrix& stego);

}  // namespace plsteg
