#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace plsteg {

struct Pixel {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Pixel&, const Pixel&) = default;
};

struct Coordinate {
  std::size_t row = 0;
  std::size_t column = 0;

  friend bool operator==(const Coordinate&, const Coordinate&) = default;
};

/// Row-major RGB raster, 8 bits per channel. A pixel's linear index counts
/// left-to-right, top-to-bottom, so index X lives at (X / width, X % width).
class ImageMatrix {
 public:
  /// Throws Error(DecodeError) if either dimension is zero.
  ImageMatrix(std::size_t height, std::size_t width, Pixel fill = {});
  ImageMatrix(std::size_t height, std::size_t width, std::vector<Pixel> pixels);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t pixel_count() const noexcept { return pixels_.size(); }

  const Pixel& at(std::size_t row, std::size_t column) const;
  Pixel& at(std::size_t row, std::size_t column);

  /// Access by linear pixel index; bounds-checked.
  const Pixel& at_index(std::size_t index) const;
  Pixel& at_index(std::size_t index);

  std::span<const Pixel> pixels() const noexcept { return pixels_; }
  std::span<Pixel> pixels() noexcept { return pixels_; }

  friend bool operator==(const ImageMatrix&, const ImageMatrix&) = default;

 private:
  std::size_t height_;
  std::size_t width_;
  std::vector<Pixel> pixels_;
};

/// Maps a linear pixel index to (row, column) for an image `width` pixels
/// wide. Throws Error(IndexOutOfRange) when index >= pixel_count.
Coordinate locate(std::size_t index, std::size_t width, std::size_t pixel_count);

enum class ImageFormat { Png, Bmp };

/// Conversions applied while decoding; callers decide whether to warn.
struct LoadNotes {
  ImageFormat format = ImageFormat::Png;
  bool alpha_dropped = false;
  bool converted_to_rgb = false;  // grayscale or palette source
  bool reduced_from_16_bit = false;
};

/// Loads a PNG or uncompressed BMP. Lossy sources (JPEG, WebP) and anything
/// unrecognised raise Error(UnsupportedFormat); a missing file raises
/// FileNotFound; a corrupt PNG/BMP raises DecodeError.
ImageMatrix load_image(const std::filesystem::path& path, LoadNotes* notes = nullptr);

/// Format is chosen by extension (.png or .bmp). Other extensions raise
/// Error(UnsupportedFormat); write failures raise IoError.
void save_image(const ImageMatrix& image, const std::filesystem::path& path);

ImageFormat format_for_path(const std::filesystem::path& path);

}  // namespace plsteg
