#include "tntf/image.hpp"

#include <cmath>
#include <stdexcept>

namespace tntf {

Image::Image(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), data_(width * height, fill) {
  if (width == 0 || height == 0) throw std::invalid_argument("Image: zero dimension");
}

Image::Image(std::size_t width, std::size_t height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width == 0 || height == 0) throw std::invalid_argument("Image: zero dimension");
  if (data_.size() != width * height)
    throw std::invalid_argument("Image: data length does not match width*height");
}

double Image::wrapped(long row, long col) const noexcept {
  const long h = static_cast<long>(height_);
  const long w = static_cast<long>(width_);
  row %= h;
  col %= w;
  if (row < 0) row += h;
  if (col < 0) col += w;
  return data_[static_cast<std::size_t>(row) * width_ + static_cast<std::size_t>(col)];
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double squared_norm(std::span<const double> a) {
  double acc = 0.0;
  for (double x : a) acc += x * x;
  return acc;
}

double norm2(std::span<const double> a) { return std::sqrt(squared_norm(a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

bool all_finite(std::span<const double> a) {
  for (double x : a)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace tntf
