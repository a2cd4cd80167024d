#include "tntf/image_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <vector>

#ifdef TNTF_HAVE_PNG
#include <png.h>
#endif

namespace tntf {
namespace {

using Kind = ImageIoError::Kind;

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageIoError(Kind::unreadable, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw ImageIoError(Kind::unreadable, "read error on " + path.string());
  return bytes;
}

// Header tokenizer for the netpbm family: whitespace separated, '#' starts a
// comment that runs to end of line.
class PnmCursor {
 public:
  explicit PnmCursor(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  unsigned long read_uint(const char* what) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_]))
      throw ImageIoError(Kind::malformed, std::string("PGM: expected ") + what);
    unsigned long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + static_cast<unsigned long>(bytes_[pos_] - '0');
      if (value > 1'000'000'000UL) throw ImageIoError(Kind::malformed, std::string("PGM: oversized ") + what);
      ++pos_;
    }
    return value;
  }

  // Exactly one whitespace byte separates the header from a binary raster.
  void skip_single_space() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_]))
      throw ImageIoError(Kind::malformed, "PGM: missing whitespace before raster");
    ++pos_;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }

 private:
  const std::vector<unsigned char>& bytes_;
  std::size_t pos_ = 2;
};

Image parse_pgm(const std::vector<unsigned char>& bytes) {
  const bool binary = bytes[1] == '5';
  PnmCursor cur(bytes);
  const unsigned long width = cur.read_uint("width");
  const unsigned long height = cur.read_uint("height");
  const unsigned long maxval = cur.read_uint("maxval");
  if (width == 0 || height == 0) throw ImageIoError(Kind::zero_dimensions, "PGM: zero width or height");
  if (maxval == 0) throw ImageIoError(Kind::malformed, "PGM: maxval must be positive");
  if (maxval > 255) throw ImageIoError(Kind::unsupported_format, "PGM: only 8-bit maxval is supported");

  const std::size_t n = width * height;
  std::vector<double> data(n);
  const double denom = static_cast<double>(maxval);
  if (binary) {
    cur.skip_single_space();
    if (bytes.size() - cur.pos() < n) throw ImageIoError(Kind::malformed, "PGM: truncated raster");
    for (std::size_t i = 0; i < n; ++i) {
      const unsigned v = bytes[cur.pos() + i];
      if (v > maxval) throw ImageIoError(Kind::malformed, "PGM: sample exceeds maxval");
      data[i] = v / denom;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      unsigned long v = 0;
      try {
        v = cur.read_uint("sample");
      } catch (const ImageIoError&) {
        throw ImageIoError(Kind::malformed, "PGM: truncated or invalid raster");
      }
      if (v > maxval) throw ImageIoError(Kind::malformed, "PGM: sample exceeds maxval");
      data[i] = static_cast<double>(v) / denom;
    }
  }
  return Image(width, height, std::move(data));
}

#ifdef TNTF_HAVE_PNG
Image parse_png(const std::vector<unsigned char>& bytes) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
    throw ImageIoError(Kind::malformed, std::string("PNG: ") + image.message);
  const auto original = image.format;
  if (original & (PNG_FORMAT_FLAG_COLOR | PNG_FORMAT_FLAG_ALPHA | PNG_FORMAT_FLAG_LINEAR)) {
    png_image_free(&image);
    throw ImageIoError(Kind::unsupported_format, "PNG: only 8-bit grayscale without alpha is supported");
  }
  if (image.width == 0 || image.height == 0) {
    png_image_free(&image);
    throw ImageIoError(Kind::zero_dimensions, "PNG: zero width or height");
  }
  image.format = PNG_FORMAT_GRAY;
  std::vector<unsigned char> raster(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, raster.data(), 0, nullptr))
    throw ImageIoError(Kind::malformed, std::string("PNG: ") + image.message);
  std::vector<double> data(raster.size());
  std::transform(raster.begin(), raster.end(), data.begin(), [](unsigned char b) { return b / 255.0; });
  return Image(image.width, image.height, std::move(data));
}
#endif

bool is_png_signature(const std::vector<unsigned char>& bytes) {
  static constexpr std::array<unsigned char, 8> sig{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  return bytes.size() >= sig.size() && std::equal(sig.begin(), sig.end(), bytes.begin());
}

}  // namespace

std::uint8_t quantize_pixel(double value) noexcept {
  if (!(value > 0.0)) return 0;  // also maps NaN to 0
  if (value >= 1.0) return 255;
  return static_cast<std::uint8_t>(std::round(value * 255.0));
}

bool png_supported() noexcept {
#ifdef TNTF_HAVE_PNG
  return true;
#else
  return false;
#endif
}

Image read_image(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  if (bytes.size() >= 2 && bytes[0] == 'P') {
    if (bytes[1] == '2' || bytes[1] == '5') return parse_pgm(bytes);
    if (bytes[1] >= '1' && bytes[1] <= '7')
      throw ImageIoError(Kind::unsupported_format, "only grayscale PGM (P2/P5) is supported");
  }
  if (is_png_signature(bytes)) {
#ifdef TNTF_HAVE_PNG
    return parse_png(bytes);
#else
    throw ImageIoError(Kind::unsupported_format, "built without PNG support");
#endif
  }
  if (bytes.empty()) throw ImageIoError(Kind::malformed, "empty file " + path.string());
  throw ImageIoError(Kind::unsupported_format, "unrecognized image format: " + path.string());
}

ImageFormat format_for_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" ? ImageFormat::png : ImageFormat::pgm_binary;
}

void write_image(const Image& img, const std::filesystem::path& path, ImageFormat format) {
  if (img.empty()) throw ImageIoError(Kind::zero_dimensions, "cannot write an empty image");
  std::vector<unsigned char> raster(img.size());
  std::transform(img.pixels().begin(), img.pixels().end(), raster.begin(), quantize_pixel);

  if (format == ImageFormat::png) {
#ifdef TNTF_HAVE_PNG
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&image, path.c_str(), 0, raster.data(), 0, nullptr))
      throw ImageIoError(Kind::write_failed, std::string("PNG write failed: ") + image.message);
    return;
#else
    throw ImageIoError(Kind::unsupported_format, "built without PNG support");
#endif
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ImageIoError(Kind::write_failed, "cannot open " + path.string() + " for writing");
  if (format == ImageFormat::pgm_binary) {
    out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(raster.data()), static_cast<std::streamsize>(raster.size()));
  } else {
    out << "P2\n" << img.width() << ' ' << img.height() << "\n255\n";
    for (std::size_t r = 0; r < img.height(); ++r) {
      for (std::size_t c = 0; c < img.width(); ++c) {
        if (c) out << ' ';
        out << static_cast<unsigned>(raster[r * img.width() + c]);
      }
      out << '\n';
    }
  }
  if (!out) throw ImageIoError(Kind::write_failed, "write error on " + path.string());
}

}  // namespace tntf
