#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "tntf/image.hpp"

namespace tntf {

enum class ImageFormat { pgm_ascii, pgm_binary, png };

class ImageIoError : public std::runtime_error {
 public:
  enum class Kind { unreadable, unsupported_format, malformed, zero_dimensions, write_failed };

  ImageIoError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Reads a grayscale PGM (P2/P5, maxval <= 255) or 8-bit grayscale PNG.
/// Pixel values are divided by the file's maxval.
Image read_image(const std::filesystem::path& path);

/// Clamps to [0,1], scales by 255 and rounds half away from zero.
void write_image(const Image& img, const std::filesystem::path& path, ImageFormat format);

/// Picks a format from the extension: .png -> png, anything else -> binary PGM.
ImageFormat format_for_path(const std::filesystem::path& path);

std::uint8_t quantize_pixel(double value) noexcept;

bool png_supported() noexcept;

}  // namespace tntf
