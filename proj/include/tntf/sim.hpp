#pragma once

#include <cstdint>
#include <string_view>

#include "tntf/image.hpp"
#include "tntf/linops.hpp"

namespace tntf {

enum class BlurKernel { average5 };

BlurKernel parse_blur_kernel(std::string_view name);
std::string_view to_string(BlurKernel kernel) noexcept;
BlurOperator make_blur(BlurKernel kernel);

struct DegradationSpec {
  BlurKernel kernel = BlurKernel::average5;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// sigma * N(0,1) per pixel; pixel i (row-major) uses rng::counter_gaussian(seed, i).
Image gaussian_noise(std::size_t width, std::size_t height, double sigma, std::uint64_t seed);

/// z = K u + noise. No clipping.
Image degrade(const Image& u, const DegradationSpec& spec);

}  // namespace tntf
