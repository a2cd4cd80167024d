#pragma once

#include <string>

#include "tntf/image.hpp"

namespace tntf {

struct QualityReport {
  double psnr_db = 0.0;
  double ssim = 0.0;
};

/// 10 log10(255^2 / MSE) with both images scaled to [0,255]. Returns
/// +infinity for identical images.
double psnr(const Image& ref, const Image& test);

/// Mean SSIM: 11x11 Gaussian window (sigma 1.5), K1 = 0.01, K2 = 0.03,
/// dynamic range 255, symmetric boundary extension. Needs both sides >= 11.
double ssim(const Image& ref, const Image& test);

QualityReport evaluate(const Image& ref, const Image& test);

/// "PSNR: 35.40 dB  SSIM: 0.980" (inf for identical images).
std::string format_quality(const QualityReport& report);

}  // namespace tntf
