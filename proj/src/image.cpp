#include "plsteg/image.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>

#include "plsteg/error.hpp"

namespace plsteg {

ImageMatrix::ImageMatrix(std::size_t height, std::size_t width, Pixel fill)
    : ImageMatrix(height, width, std::vector<Pixel>(height * width, fill)) {}

ImageMatrix::ImageMatrix(std::size_t height, std::size_t width, std::vector<Pixel> pixels)
    : height_(height), width_(width), pixels_(std::move(pixels)) {
  if (height_ == 0 || width_ == 0) {
    throw Error(ErrorCode::DecodeError, "image dimensions must be at least 1x1");
  }
  if (pixels_.size() != height_ * width_) {
    throw Error(ErrorCode::DecodeError, "pixel buffer does not match image dimensions");
  }
}

const Pixel& ImageMatrix::at(std::size_t row, std::size_t column) const {
  if (row >= height_ || column >= width_) {
    throw Error(ErrorCode::IndexOutOfRange, "pixel coordinate outside image");
  }
  return pixels_[row * width_ + column];
}

Pixel& ImageMatrix::at(std::size_t row, std::size_t column) {
  return const_cast<Pixel&>(std::as_const(*this).at(row, column));
}

const Pixel& ImageMatrix::at_index(std::size_t index) const {
  const Coordinate c = locate(index, width_, pixels_.size());
  return pixels_[c.row * width_ + c.column];
}

Pixel& ImageMatrix::at_index(std::size_t index) {
  return const_cast<Pixel&>(std::as_const(*this).at_index(index));
}

Coordinate locate(std::size_t index, std::size_t width, std::size_t pixel_count) {
  if (width == 0 || index >= pixel_count) {
    throw Error(ErrorCode::IndexOutOfRange,
                "pixel index " + std::to_string(index) + " outside image of " +
                    std::to_string(pixel_count) + " pixels");
  }
  return {index / width, index % width};
}

namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::FileNotFound, "no such file: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool starts_with(const std::vector<std::uint8_t>& data, std::initializer_list<std::uint8_t> magic) {
  return data.size() >= magic.size() && std::equal(magic.begin(), magic.end(), data.begin());
}

// ---------------------------------------------------------------- PNG

struct PngReadSource {
  const std::vector<std::uint8_t>* data;
  std::size_t offset;
};

void png_read_from_memory(png_structp png, png_bytep out, png_size_t length) {
  auto* src = static_cast<PngReadSource*>(png_get_io_ptr(png));
  if (src->offset + length > src->data->size()) png_error(png, "unexpected end of PNG data");
  std::memcpy(out, src->data->data() + src->offset, length);
  src->offset += length;
}

void png_error_to_longjmp(png_structp png, png_const_charp) {
  std::longjmp(png_jmpbuf(png), 1);
}

void png_silent_warning(png_structp, png_const_charp) {}

struct PngDecodeState {
  PngReadSource source{};
  LoadNotes* notes = nullptr;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  std::vector<std::uint8_t> raw;
  std::vector<png_bytep> rows;
};

// libpng reports errors with longjmp; all state lives in `st` so nothing on
// this frame needs unwinding.
bool run_png_decode(png_structp png, png_infop info, PngDecodeState& st) {
  if (setjmp(png_jmpbuf(png))) return false;

  png_set_read_fn(png, &st.source, png_read_from_memory);
  png_read_info(png, info);

  st.width = png_get_image_width(png, info);
  st.height = png_get_image_height(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);

  if (color_type == PNG_COLOR_TYPE_PALETTE) {
    png_set_palette_to_rgb(png);
    st.notes->converted_to_rgb = true;
  }
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
    if (bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    png_set_gray_to_rgb(png);
    st.notes->converted_to_rgb = true;
  }
  if (bit_depth == 16) {
    png_set_strip_16(png);
    st.notes->reduced_from_16_bit = true;
  }
  if (color_type & PNG_COLOR_MASK_ALPHA) {
    png_set_strip_alpha(png);
    st.notes->alpha_dropped = true;
  }
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  if (png_get_channels(png, info) != 3 || png_get_bit_depth(png, info) != 8) {
    png_error(png, "unexpected PNG layout after conversion");
  }

  st.raw.resize(static_cast<std::size_t>(st.width) * st.height * 3);
  st.rows.resize(st.height);
  for (png_uint_32 y = 0; y < st.height; ++y) {
    st.rows[y] = st.raw.data() + static_cast<std::size_t>(y) * st.width * 3;
  }
  png_read_image(png, st.rows.data());
  png_read_end(png, nullptr);
  return true;
}

ImageMatrix decode_png(const std::vector<std::uint8_t>& data, LoadNotes& notes) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                           png_error_to_longjmp, png_silent_warning);
  if (!png) throw Error(ErrorCode::DecodeError, "libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error(ErrorCode::DecodeError, "libpng initialisation failed");
  }

  PngDecodeState st;
  st.source = {&data, 0};
  st.notes = &notes;
  const bool ok = run_png_decode(png, info, st);
  png_destroy_read_struct(&png, &info, nullptr);
  if (!ok || st.width == 0 || st.height == 0) throw Error(ErrorCode::DecodeError, "corrupt PNG data");

  std::vector<Pixel> pixels(static_cast<std::size_t>(st.width) * st.height);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    pixels[i] = {st.raw[3 * i], st.raw[3 * i + 1], st.raw[3 * i + 2]};
  }
  return ImageMatrix(st.height, st.width, std::move(pixels));
}

void png_write_to_file(png_structp png, png_bytep data, png_size_t length) {
  auto* file = static_cast<std::FILE*>(png_get_io_ptr(png));
  if (std::fwrite(data, 1, length, file) != length) png_error(png, "short write");
}

void png_flush_file(png_structp png) {
  std::fflush(static_cast<std::FILE*>(png_get_io_ptr(png)));
}

bool run_png_encode(png_structp png, png_infop info, std::FILE* file, const ImageMatrix& image,
                    png_bytep* rows) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_set_write_fn(png, file, png_write_to_file, png_flush_file);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width()),
               static_cast<png_uint_32>(image.height()), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows);
  png_write_end(png, nullptr);
  return true;
}

void encode_png(const ImageMatrix& image, const std::filesystem::path& path) {
  std::vector<std::uint8_t> raw(image.pixel_count() * 3);
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    const Pixel& p = image.pixels()[i];
    raw[3 * i] = p.r;
    raw[3 * i + 1] = p.g;
    raw[3 * i + 2] = p.b;
  }
  std::vector<png_bytep> rows(image.height());
  for (std::size_t y = 0; y < image.height(); ++y) rows[y] = raw.data() + y * image.width() * 3;

  std::unique_ptr<std::FILE, int (*)(std::FILE*)> file(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!file) throw Error(ErrorCode::IoError, "cannot write " + path.string());

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                            png_error_to_longjmp, png_silent_warning);
  if (!png) throw Error(ErrorCode::IoError, "libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error(ErrorCode::IoError, "libpng initialisation failed");
  }
  const bool ok = run_png_encode(png, info, file.get(), image, rows.data());
  png_destroy_write_struct(&png, &info);
  if (!ok || std::fflush(file.get()) != 0) {
    throw Error(ErrorCode::IoError, "failed writing PNG " + path.string());
  }
}

// ---------------------------------------------------------------- BMP

std::uint32_t le32(const std::vector<std::uint8_t>& d, std::size_t at) {
  return static_cast<std::uint32_t>(d[at]) | (static_cast<std::uint32_t>(d[at + 1]) << 8) |
         (static_cast<std::uint32_t>(d[at + 2]) << 16) | (static_cast<std::uint32_t>(d[at + 3]) << 24);
}

std::uint16_t le16(const std::vector<std::uint8_t>& d, std::size_t at) {
  return static_cast<std::uint16_t>(d[at] | (d[at + 1] << 8));
}

void put_le32(std::vector<std::uint8_t>& d, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) d.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_le16(std::vector<std::uint8_t>& d, std::uint16_t v) {
  d.push_back(static_cast<std::uint8_t>(v));
  d.push_back(static_cast<std::uint8_t>(v >> 8));
}

// Uncompressed 24- and 32-bit BI_RGB only.
ImageMatrix decode_bmp(const std::vector<std::uint8_t>& data, LoadNotes& notes) {
  if (data.size() < 54) throw Error(ErrorCode::DecodeError, "truncated BMP header");
  const std::uint32_t pixel_offset = le32(data, 10);
  const std::uint32_t header_size = le32(data, 14);
  if (header_size < 40) throw Error(ErrorCode::UnsupportedFormat, "only BITMAPINFOHEADER BMPs are supported");
  const auto width = static_cast<std::int32_t>(le32(data, 18));
  const auto signed_height = static_cast<std::int32_t>(le32(data, 22));
  const std::uint16_t bpp = le16(data, 28);
  const std::uint32_t compression = le32(data, 30);
  if (compression != 0 || (bpp != 24 && bpp != 32)) {
    throw Error(ErrorCode::UnsupportedFormat, "only uncompressed 24/32-bit BMPs are supported");
  }
  if (width <= 0 || signed_height == 0) throw Error(ErrorCode::DecodeError, "invalid BMP dimensions");
  const bool top_down = signed_height < 0;
  const std::size_t height = top_down ? static_cast<std::size_t>(-static_cast<std::int64_t>(signed_height))
                                      : static_cast<std::size_t>(signed_height);
  const std::size_t bytes_pp = bpp / 8;
  const std::size_t stride = (static_cast<std::size_t>(width) * bytes_pp + 3) & ~std::size_t{3};
  if (pixel_offset > data.size() || (data.size() - pixel_offset) / stride < height) {
    throw Error(ErrorCode::DecodeError, "truncated BMP pixel data");
  }
  if (bpp == 32) notes.alpha_dropped = true;

  std::vector<Pixel> pixels(static_cast<std::size_t>(width) * height);
  for (std::size_t y = 0; y < height; ++y) {
    const std::size_t src_row = top_down ? y : height - 1 - y;
    const std::uint8_t* row = data.data() + pixel_offset + src_row * stride;
    for (std::size_t x = 0; x < static_cast<std::size_t>(width); ++x) {
      const std::uint8_t* px = row + x * bytes_pp;
      pixels[y * width + x] = {px[2], px[1], px[0]};
    }
  }
  return ImageMatrix(height, static_cast<std::size_t>(width), std::move(pixels));
}

void encode_bmp(const ImageMatrix& image, const std::filesystem::path& path) {
  const std::size_t stride = (image.width() * 3 + 3) & ~std::size_t{3};
  const std::size_t pixel_bytes = stride * image.height();
  std::vector<std::uint8_t> out;
  out.reserve(54 + pixel_bytes);
  out.push_back('B');
  out.push_back('M');
  put_le32(out, static_cast<std::uint32_t>(54 + pixel_bytes));
  put_le32(out, 0);
  put_le32(out, 54);
  put_le32(out, 40);
  put_le32(out, static_cast<std::uint32_t>(image.width()));
  put_le32(out, static_cast<std::uint32_t>(image.height()));
  put_le16(out, 1);
  put_le16(out, 24);
  put_le32(out, 0);
  put_le32(out, static_cast<std::uint32_t>(pixel_bytes));
  put_le32(out, 2835);
  put_le32(out, 2835);
  put_le32(out, 0);
  put_le32(out, 0);
  for (std::size_t y = image.height(); y-- > 0;) {
    for (std::size_t x = 0; x < image.width(); ++x) {
      const Pixel& p = image.at(y, x);
      out.push_back(p.b);
      out.push_back(p.g);
      out.push_back(p.r);
    }
    out.resize(out.size() + (stride - image.width() * 3), 0);
  }
  std::ofstream file(path, std::ios::binary);
  if (!file.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()))) {
    throw Error(ErrorCode::IoError, "cannot write " + path.string());
  }
}

}  // namespace

ImageFormat format_for_path(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return ImageFormat::Png;
  if (ext == ".bmp") return ImageFormat::Bmp;
  throw Error(ErrorCode::UnsupportedFormat,
              "unsupported image format '" + ext + "': only lossless PNG or BMP can carry LSB data");
}

ImageMatrix load_image(const std::filesystem::path& path, LoadNotes* notes) {
  const std::vector<std::uint8_t> data = read_file(path);
  LoadNotes local;
  LoadNotes& n = notes ? *notes : local;
  n = LoadNotes{};

  if (starts_with(data, {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A})) {
    n.format = ImageFormat::Png;
    return decode_png(data, n);
  }
  if (starts_with(data, {'B', 'M'})) {
    n.format = ImageFormat::Bmp;
    return decode_bmp(data, n);
  }
  if (starts_with(data, {0xFF, 0xD8, 0xFF})) {
    throw Error(ErrorCode::UnsupportedFormat, "JPEG is lossy and cannot carry LSB data: " + path.string());
  }
  if (data.size() >= 12 && starts_with(data, {'R', 'I', 'F', 'F'}) &&
      std::equal(data.begin() + 8, data.begin() + 12, "WEBP")) {
    throw Error(ErrorCode::UnsupportedFormat, "WebP is not supported: " + path.string());
  }
  throw Error(ErrorCode::UnsupportedFormat, "unrecognised image format: " + path.string());
}

void save_image(const ImageMatrix& image, const std::filesystem::path& path) {
  switch (format_for_path(path)) {
    case ImageFormat::Png: encode_png(image, path); return;
    case ImageFormat::Bmp: encode_bmp(image, path); return;
  }
}

}  // namespace plsteg
