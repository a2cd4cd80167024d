#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "tntf/image.hpp"

namespace tntf {

enum class SyntheticKind { square_circle, ramp_disk };

SyntheticKind parse_synthetic_kind(std::string_view name);
std::string_view to_string(SyntheticKind kind) noexcept;

/// Deterministic size x size test image.
///
/// square-circle: background 0.1, a filled rectangle at 0.9, a filled disk at
/// 0.6 and a one-pixel horizontal line at 1.0. ramp-disk adds a region whose
/// intensity increases linearly along the columns. The seed jitters shape
/// positions by at most size/32 pixels. Requires size >= 32.
Image make_synthetic(SyntheticKind kind, std::size_t size, std::uint64_t seed);

/// Bounding box [row0,row1) x [col0,col1) of the linear ramp in a ramp-disk image.
struct RampRegion {
  std::size_t row0, row1, col0, col1;
};
RampRegion ramp_region(std::size_t size, std::uint64_t seed);

}  // namespace tntf
