#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "plsteg/image.hpp"
#include "plsteg/pls.hpp"

namespace plsteg::testing {

inline ImageMatrix random_image(std::mt19937_64& rng, std::size_t height, std::size_t width) {
  std::uniform_int_distribution<int> channel(0, 255);
  std::vector<Pixel> pixels(height * width);
  for (Pixel& p : pixels) {
    p = {static_cast<std::uint8_t>(channel(rng)), static_cast<std::uint8_t>(channel(rng)),
         static_cast<std::uint8_t>(channel(rng))};
  }
  return ImageMatrix(height, width, std::move(pixels));
}

inline std::string random_hex(std::mt19937_64& rng, std::size_t length) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::uniform_int_distribution<int> digit(0, 15);
  std::string out(length, '0');
  for (char& c : out) c = kDigits[digit(rng)];
  return out;
}

inline std::string random_text(std::mt19937_64& rng, std::size_t length) {
  std::uniform_int_distribution<int> byte(0, 255);
  std::string out(length, '\0');
  for (char& c : out) c = static_cast<char>(byte(rng));
  return out;
}

/// Scratch directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("plsteg-test-" + std::to_string(rd()) + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline std::filesystem::path data_file(const std::string& name) {
  return std::filesystem::path(PLSTEG_TEST_DATA_DIR) / name;
}

}  // namespace plsteg::testing
