#include "tntf/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tntf/rng.hpp"

namespace tntf {
namespace {

constexpr double kBackground = 0.1;
constexpr double kRectangle = 0.9;
constexpr double kDisk = 0.6;
constexpr double kLine = 1.0;

struct Jitter {
  long rows;
  long cols;
};

Jitter jitter_for(std::size_t size, std::uint64_t seed) {
  const long span = static_cast<long>(size / 32);
  auto draw = [&](std::uint64_t counter) {
    const auto bits = rng::counter_bits(seed, counter);
    return static_cast<long>(bits % static_cast<std::uint64_t>(2 * span + 1)) - span;
  };
  return {draw(0), draw(1)};
}

std::size_t at(double frac, std::size_t size, long shift) {
  const long v = std::lround(frac * static_cast<double>(size)) + shift;
  return static_cast<std::size_t>(std::clamp(v, 0L, static_cast<long>(size)));
}

void fill_rect(Image& img, std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1, double value) {
  for (std::size_t r = r0; r < r1; ++r)
    for (std::size_t c = c0; c < c1; ++c) img(r, c) = value;
}

}  // namespace

SyntheticKind parse_synthetic_kind(std::string_view name) {
  if (name == "square-circle") return SyntheticKind::square_circle;
  if (name == "ramp-disk") return SyntheticKind::ramp_disk;
  throw std::invalid_argument("unknown synthetic kind: " + std::string(name));
}

std::string_view to_string(SyntheticKind kind) noexcept {
  return kind == SyntheticKind::square_circle ? "square-circle" : "ramp-disk";
}

RampRegion ramp_region(std::size_t size, std::uint64_t seed) {
  const auto j = jitter_for(size, seed);
  return {at(0.10, size, j.rows), at(0.36, size, j.rows), at(0.54, size, j.cols), at(0.92, size, j.cols)};
}

Image make_synthetic(SyntheticKind kind, std::size_t size, std::uint64_t seed) {
  if (size < 32) throw std::invalid_argument("make_synthetic: size must be at least 32");
  const auto j = jitter_for(size, seed);
  Image img(size, size, kBackground);

  fill_rect(img, at(0.14, size, j.rows), at(0.50, size, j.rows), at(0.12, size, j.cols), at(0.46, size, j.cols),
            kRectangle);

  const double n = static_cast<double>(size);
  const double cr = 0.62 * n + static_cast<double>(j.rows);
  const double cc = 0.66 * n + static_cast<double>(j.cols);
  const double radius = 0.20 * n;
  for (std::size_t r = 0; r < size; ++r) {
    for (std::size_t c = 0; c < size; ++c) {
      const double dr = static_cast<double>(r) + 0.5 - cr;
      const double dc = static_cast<double>(c) + 0.5 - cc;
      if (dr * dr + dc * dc <= radius * radius) img(r, c) = kDisk;
    }
  }

  const std::size_t line_row = at(0.88, size, 0);
  fill_rect(img, line_row, line_row + 1, at(0.10, size, j.cols), at(0.90, size, j.cols), kLine);

  if (kind == SyntheticKind::ramp_disk) {
    const auto ramp = ramp_region(size, seed);
    const double slope = 0.6 / static_cast<double>(ramp.col1 - ramp.col0 - 1);
    for (std::size_t r = ramp.row0; r < ramp.row1; ++r)
      for (std::size_t c = ramp.col0; c < ramp.col1; ++c)
        img(r, c) = 0.2 + slope * static_cast<double>(c - ramp.col0);
  }
  return img;
}

}  // namespace tntf
