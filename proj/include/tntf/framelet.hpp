#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "tntf/image.hpp"

namespace tntf {

/// Small 2D filter. Tap (anchor_row, anchor_col) of the grid holds the
/// filter value at index (0,0); other taps sit at their offset from it.
struct Filter {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> taps;  // row-major, rows x cols
  int anchor_row = 0;
  int anchor_col = 0;

  double tap(std::size_t r, std::size_t c) const { return taps[r * cols + c]; }
  double sum() const;
  double frobenius_norm() const;
  std::size_t extent() const { return rows > cols ? rows : cols; }

  /// Fourier series sum_k h(k) exp(-i k.xi) with k = (row, col) offsets.
  std::complex<double> symbol(double xi_row, double xi_col) const;
};

/// One level of a non-stationary system: a low-pass filter, its high-pass
/// companions, and the a-trous hole factor applied at this level.
struct FilterBank {
  std::string name;
  Filter lowpass;
  std::vector<Filter> highpass;
  std::size_t dilation = 1;
};

/// Directional Haar framelet: 2x2 filters, taps in {0, +-1/4}. High-pass
/// order: two diagonal differences, then horizontal (tau3), vertical (tau4),
/// horizontal (tau5), vertical (tau6).
FilterBank dhf_bank(std::size_t dilation);

/// 3x3 DCT-II framelet, tau_{3i+j} = c_i^T c_j / 3, centred anchor.
FilterBank dct_bank(std::size_t dilation);

/// Periodic filtering with taps spaced `dilation` apart.
///   adjoint == false: out(g) = sum_k h(k) in(g + d*k)   (analysis, h* convolution)
///   adjoint == true:  out(g) = sum_k h(k) in(g - d*k)   (synthesis, h convolution)
Image convolve_periodic(const Image& img, const Filter& f, std::size_t dilation, bool adjoint);

/// Raw-buffer form of convolve_periodic that accumulates `scale * result`
/// into `out`. No shape checks beyond sizes.
void convolve_periodic_accumulate(std::span<const double> in, std::size_t width, std::size_t height,
                                  const Filter& f, std::size_t dilation, bool adjoint, std::span<double> out,
                                  double scale = 1.0);

/// Throws std::invalid_argument when the dilated support does not fit.
void check_filter_fits(const Filter& f, std::size_t dilation, std::size_t width, std::size_t height);

struct CoefficientPyramid {
  struct Level {
    std::vector<Image> highpass;
  };
  std::vector<Level> levels;  // same order as the banks (finest first)
  Image coarse;
  std::size_t width = 0;
  std::size_t height = 0;
};

/// Undecimated decomposition. `banks` run from the finest level to the
/// coarsest; bank j's dilation is used as given.
CoefficientPyramid udfmt_decompose(const Image& img, std::span<const FilterBank> banks);
Image udfmt_reconstruct(const CoefficientPyramid& pyr, std::span<const FilterBank> banks);

/// Standard two-level system: DHF (dilation 1) followed by DCT (dilation `dct_dilation`).
std::vector<FilterBank> two_level_banks(std::size_t dct_dilation = 2);

struct TffbReport {
  double max_tffb_residual = 0.0;
  double max_pou_residual = 0.0;
};

/// Samples xi on a grid x grid lattice of [0, 2pi)^2 and checks
/// sum_l tau_l(xi) conj(tau_l(xi + pi*omega)) = delta(omega) for omega in {0,1}^2.
/// The omega = 0 slice is the partition-of-unity residual. Requires grid >= 8.
TffbReport verify_tffb(const FilterBank& bank, std::size_t grid);

/// Diagnostic dump: one PGM per plane (min-max normalised) and index.json.
void dump_pyramid(const CoefficientPyramid& pyr, std::span<const FilterBank> banks,
                  const std::filesystem::path& directory);

}  // namespace tntf
