#include "tntf/metrics.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <vector>

namespace tntf {
namespace {

constexpr double kPeak = 255.0;
constexpr int kWindow = 11;
constexpr double kWindowSigma = 1.5;
constexpr double kC1 = (0.01 * kPeak) * (0.01 * kPeak);
constexpr double kC2 = (0.03 * kPeak) * (0.03 * kPeak);

void require_same_shape(const Image& a, const Image& b, const char* who) {
  if (!a.same_shape(b)) throw std::invalid_argument(std::string(who) + ": image dimensions differ");
}

std::array<double, kWindow> gaussian_taps() {
  std::array<double, kWindow> g{};
  double sum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double x = i - kWindow / 2;
    g[i] = std::exp(-x * x / (2.0 * kWindowSigma * kWindowSigma));
    sum += g[i];
  }
  for (double& v : g) v /= sum;
  return g;
}

// Mirror with edge repetition: -1 -> 0, n -> n-1.
long reflect(long i, long n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - i - 1;
  }
  return i;
}

// Separable Gaussian filtering with symmetric extension.
std::vector<double> gaussian_filter(const std::vector<double>& in, long w, long h) {
  static const auto g = gaussian_taps();
  constexpr long half = kWindow / 2;
  std::vector<double> tmp(in.size()), out(in.size());
  for (long r = 0; r < h; ++r)
    for (long c = 0; c < w; ++c) {
      double acc = 0.0;
      for (long k = -half; k <= half; ++k) acc += g[k + half] * in[r * w + reflect(c + k, w)];
      tmp[r * w + c] = acc;
    }
  for (long r = 0; r < h; ++r)
    for (long c = 0; c < w; ++c) {
      double acc = 0.0;
      for (long k = -half; k <= half; ++k) acc += g[k + half] * tmp[reflect(r + k, h) * w + c];
      out[r * w + c] = acc;
    }
  return out;
}

}  // namespace

double psnr(const Image& ref, const Image& test) {
  require_same_shape(ref, test, "psnr");
  double sse = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double d = kPeak * (ref.pixels()[i] - test.pixels()[i]);
    sse += d * d;
  }
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sse / static_cast<double>(ref.size());
  return 10.0 * std::log10(kPeak * kPeak / mse);
}

double ssim(const Image& ref, const Image& test) {
  require_same_shape(ref, test, "ssim");
  if (ref.width() < static_cast<std::size_t>(kWindow) || ref.height() < static_cast<std::size_t>(kWindow))
    throw std::invalid_argument("ssim: image smaller than the 11x11 window");
  const long w = static_cast<long>(ref.width());
  const long h = static_cast<long>(ref.height());
  const std::size_t n = ref.size();

  std::vector<double> a(n), b(n), aa(n), bb(n), ab(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = kPeak * ref.pixels()[i];
    b[i] = kPeak * test.pixels()[i];
    aa[i] = a[i] * a[i];
    bb[i] = b[i] * b[i];
    ab[i] = a[i] * b[i];
  }
  const auto mu_a = gaussian_filter(a, w, h);
  const auto mu_b = gaussian_filter(b, w, h);
  const auto m_aa = gaussian_filter(aa, w, h);
  const auto m_bb = gaussian_filter(bb, w, h);
  const auto m_ab = gaussian_filter(ab, w, h);

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double var_a = m_aa[i] - mu_a[i] * mu_a[i];
    const double var_b = m_bb[i] - mu_b[i] * mu_b[i];
    const double cov = m_ab[i] - mu_a[i] * mu_b[i];
    const double num = (2.0 * mu_a[i] * mu_b[i] + kC1) * (2.0 * cov + kC2);
    const double den = (mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + kC1) * (var_a + var_b + kC2);
    total += num / den;
  }
  return total / static_cast<double>(n);
}

QualityReport evaluate(const Image& ref, const Image& test) { return {psnr(ref, test), ssim(ref, test)}; }

std::string format_quality(const QualityReport& report) {
  char buf[96];
  if (std::isinf(report.psnr_db))
    std::snprintf(buf, sizeof buf, "PSNR: inf dB  SSIM: %.3f", report.ssim);
  else
    std::snprintf(buf, sizeof buf, "PSNR: %.2f dB  SSIM: %.3f", report.psnr_db, report.ssim);
  return buf;
}

}  // namespace tntf
