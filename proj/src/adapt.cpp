#include "tntf/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tntf {
namespace {

void check_window(std::size_t window, std::size_t width, std::size_t height) {
  if (window == 0 || window % 2 == 0) throw std::invalid_argument("window must be an odd positive integer");
  if (window > std::min(width, height)) throw std::invalid_argument("window larger than the image");
}

}  // namespace

NoiseModel NoiseModel::for_bank(double sigma, const FilterBank& bank, double prefilter_energy) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("NoiseModel: sigma must be >= 0");
  if (bank.highpass.size() != 8) throw std::invalid_argument("NoiseModel: expected an 8-filter high-pass bank");
  NoiseModel model;
  model.sigma = sigma;
  for (std::size_t k = 0; k < 8; ++k) {
    const double f = bank.highpass[k].frobenius_norm();
    model.sigma_kappa_sq[k] = sigma * sigma * prefilter_energy * f * f;
  }
  return model;
}

std::vector<double> periodic_box_sum(std::span<const double> plane, std::size_t width, std::size_t height,
                                     std::size_t window) {
  check_window(window, width, height);
  if (plane.size() != width * height) throw std::invalid_argument("periodic_box_sum: size mismatch");
  const long half = static_cast<long>(window / 2);
  const long w = static_cast<long>(width);
  const long h = static_cast<long>(height);

  std::vector<double> rows(plane.size(), 0.0);
  for (long r = 0; r < h; ++r)
    for (long c = 0; c < w; ++c) {
      double acc = 0.0;
      for (long d = -half; d <= half; ++d) acc += plane[r * w + (((c + d) % w) + w) % w];
      rows[r * w + c] = acc;
    }
  std::vector<double> out(plane.size(), 0.0);
  for (long r = 0; r < h; ++r)
    for (long c = 0; c < w; ++c) {
      double acc = 0.0;
      for (long d = -half; d <= half; ++d) acc += rows[((((r + d) % h) + h) % h) * w + c];
      out[r * w + c] = acc;
    }
  return out;
}

GroupWeightMap estimate_lambda(std::span<const double> coeffs_s1, std::size_t width, std::size_t height,
                               double base_lambda, std::size_t window) {
  if (!(base_lambda > 0.0)) throw std::invalid_argument("estimate_lambda: base_lambda must be positive");
  const std::size_t n = width * height;
  if (coeffs_s1.size() != 6 * n) throw std::invalid_argument("estimate_lambda: expected 6n coefficients");
  check_window(window, width, height);

  std::vector<double> diag(n), axis(n);
  const double* x1 = coeffs_s1.data();
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = std::hypot(x1[i], x1[n + i]);
    axis[i] = std::hypot(x1[2 * n + i], x1[3 * n + i]);
  }
  const double numerator = base_lambda * static_cast<double>(window * window);
  auto weights_from = [&](const std::vector<double>& norms) {
    auto sums = periodic_box_sum(norms, width, height, window);
    for (double& s : sums) s = numerator / std::max(s, kWeightFloor);
    return sums;
  };
  return GroupWeightMap{weights_from(diag), weights_from(axis)};
}

SubbandWeightMap estimate_theta(std::span<const double> coeffs_s2, std::size_t width, std::size_t height,
                                const NoiseModel& noise, std::size_t window) {
  const std::size_t n = width * height;
  if (coeffs_s2.size() != 8 * n) throw std::invalid_argument("estimate_theta: expected 8n coefficients");
  check_window(window, width, height);
  const double count = static_cast<double>(window * window);

  SubbandWeightMap out{std::vector<double>(8 * n)};
  std::vector<double> magnitude(n);
  for (std::size_t k = 0; k < 8; ++k) {
    const auto plane = coeffs_s2.subspan(k * n, n);
    std::transform(plane.begin(), plane.end(), magnitude.begin(), [](double x) { return std::abs(x); });
    const auto sums = periodic_box_sum(magnitude, width, height, window);
    const double noise_var = noise.sigma_kappa_sq[k];
    for (std::size_t i = 0; i < n; ++i) {
      const double mean = sums[i] / count;
      const double signal_var = std::max(mean * mean - noise_var, kWeightFloor);
      out.theta[k * n + i] = std::numbers::sqrt2 * noise_var / std::sqrt(signal_var);
    }
  }
  return out;
}

}  // namespace tntf
