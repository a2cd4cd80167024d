#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "test_util.hpp"
#include "tntf/metrics.hpp"
#include "tntf/sim.hpp"
#include "tntf/synthetic.hpp"

using namespace tntf;

TEST_CASE("psnr examples") {
  const Image ref = testutil::random_image(16, 16, 1, 0.0, 0.8);
  Image shifted = ref;
  for (double& x : shifted.pixels()) x += 0.1;
  CHECK(psnr(ref, shifted) == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(psnr(ref, ref) == std::numeric_limits<double>::infinity());
  CHECK(psnr(Image(16, 16, 0.0), Image(16, 16, 1.0)) == doctest::Approx(0.0));
  CHECK(psnr(ref, shifted) == psnr(shifted, ref));
  CHECK_THROWS_AS(psnr(ref, Image(16, 15)), std::invalid_argument);
}

TEST_CASE("psnr falls as noise grows") {
  const Image truth = make_synthetic(SyntheticKind::square_circle, 64, 0);
  double last = std::numeric_limits<double>::infinity();
  for (double sigma : {0.01, 0.02, 0.04}) {
    Image noisy = truth;
    axpy(1.0, gaussian_noise(64, 64, sigma, 3).pixels(), noisy.pixels());
    const double p = psnr(truth, noisy);
    CHECK(p < last);
    last = p;
  }
}

TEST_CASE("ssim basics") {
  const Image a = make_synthetic(SyntheticKind::square_circle, 64, 0);
  CHECK(ssim(a, a) == doctest::Approx(1.0).epsilon(1e-12));
  Image inverted(64, 64);
  for (std::size_t i = 0; i < a.size(); ++i) inverted.pixels()[i] = 1.0 - a.pixels()[i];
  const double inv = ssim(a, inverted);
  CHECK(inv < 0.5);
  CHECK(inv == doctest::Approx(-0.086035724405).epsilon(1e-9));  // regression baseline

  oracle::Rand rng(6);
  for (int trial = 0; trial < 5; ++trial) {
    const Image x = testutil::random_image(20, 17, 10 + trial), y = testutil::random_image(20, 17, 20 + trial);
    CHECK(ssim(x, y) == ssim(y, x));
    CHECK((ssim(x, y) >= -1.0 && ssim(x, y) <= 1.0));
  }
  CHECK_THROWS_AS(ssim(Image(10, 20), Image(10, 20)), std::invalid_argument);
  CHECK_THROWS_AS(ssim(Image(20, 20), Image(20, 21)), std::invalid_argument);
}

TEST_CASE("ssim matches a direct windowed evaluation") {
  const Image x = make_synthetic(SyntheticKind::ramp_disk, 32, 1);
  Image y = x;
  axpy(1.0, gaussian_noise(32, 32, 0.05, 9).pixels(), y.pixels());
  CHECK(ssim(x, y) == doctest::Approx(oracle::ssim_direct(x.vector(), y.vector(), 32, 32)).epsilon(1e-10));
  const Image r1 = testutil::random_image(23, 13, 2), r2 = testutil::random_image(23, 13, 3);
  CHECK(ssim(r1, r2) == doctest::Approx(oracle::ssim_direct(r1.vector(), r2.vector(), 23, 13)).epsilon(1e-9));
}

TEST_CASE("quality formatting") {
  CHECK(format_quality({35.4012, 0.98}) == "PSNR: 35.40 dB  SSIM: 0.980");
  CHECK(format_quality({std::numeric_limits<double>::infinity(), 1.0}) == "PSNR: inf dB  SSIM: 1.000");
}
