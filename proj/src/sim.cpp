#include "tntf/sim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tntf/rng.hpp"

namespace tntf {

BlurKernel parse_blur_kernel(std::string_view name) {
  if (name == "average5") return BlurKernel::average5;
  throw std::invalid_argument("unknown kernel: " + std::string(name));
}

std::string_view to_string(BlurKernel) noexcept { return "average5"; }

BlurOperator make_blur(BlurKernel) { return BlurOperator::average(5); }

Image gaussian_noise(std::size_t width, std::size_t height, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("noise sigma must be finite and >= 0");
  Image noise(width, height, 0.0);
  if (sigma == 0.0) return noise;
  auto px = noise.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = sigma * rng::counter_gaussian(seed, i);
  return noise;
}

Image degrade(const Image& u, const DegradationSpec& spec) {
  if (!(spec.sigma >= 0.0)) throw std::invalid_argument("degrade: sigma must be >= 0");
  Image z = make_blur(spec.kernel).apply(u);
  if (spec.sigma > 0.0) {
    const Image noise = gaussian_noise(u.width(), u.height(), spec.sigma, spec.seed);
    axpy(1.0, noise.pixels(), z.pixels());
  }
  return z;
}

}  // namespace tntf
