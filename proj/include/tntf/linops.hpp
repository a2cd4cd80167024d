#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "tntf/framelet.hpp"
#include "tntf/image.hpp"

namespace tntf {

/// Periodic convolution blur. The default kernel is the centred 5x5 average.
class BlurOperator {
 public:
  explicit BlurOperator(Filter kernel);
  static BlurOperator average(std::size_t size = 5);

  /// Forward: convolution with the kernel. Adjoint: correlation.
  Image apply(const Image& img, bool adjoint = false) const;
  void apply_into(std::span<const double> in, std::size_t width, std::size_t height, bool adjoint,
                  std::span<double> out) const;

  const Filter& kernel() const noexcept { return kernel_; }

 private:
  Filter kernel_;
};

/// Stacked framelet coefficients, plane-major: plane l occupies [l*n, (l+1)*n).
/// s1 carries the six DHF high-pass planes, s2 the eight DCT high-pass planes.
/// A block is empty when the operator mode does not produce it.
struct Coefficients {
  std::vector<double> s1;
  std::vector<double> s2;

  std::size_t size() const noexcept { return s1.size() + s2.size(); }
  bool same_layout(const Coefficients& other) const noexcept {
    return s1.size() == other.s1.size() && s2.size() == other.s2.size();
  }
};

double dot(const Coefficients& a, const Coefficients& b);
double squared_norm(const Coefficients& a);
/// y += alpha * x
void axpy(double alpha, const Coefficients& x, Coefficients& y);

enum class AnalysisMode { tntf, dhf_only, dct_only, dhf_dct };

std::string_view to_string(AnalysisMode mode) noexcept;

/// A = [B1h; B2h B1l] in tntf mode, with the variants used for ablation:
/// dhf_only = B1h, dct_only = B2h, dhf_dct = [B1h; B2h].
class AnalysisOperator {
 public:
  explicit AnalysisOperator(AnalysisMode mode, std::size_t dct_dilation = 2);

  AnalysisMode mode() const noexcept { return mode_; }
  bool has_s1() const noexcept { return mode_ != AnalysisMode::dct_only; }
  bool has_s2() const noexcept { return mode_ != AnalysisMode::dhf_only; }
  std::size_t s1_planes() const noexcept { return has_s1() ? dhf_.highpass.size() : 0; }
  std::size_t s2_planes() const noexcept { return has_s2() ? dct_.highpass.size() : 0; }

  const FilterBank& dhf() const noexcept { return dhf_; }
  const FilterBank& dct() const noexcept { return dct_; }

  Coefficients zeros(std::size_t n) const;

  Coefficients apply(const Image& img) const;
  Image adjoint(const Coefficients& s, std::size_t width, std::size_t height) const;

  void apply_into(std::span<const double> in, std::size_t width, std::size_t height, Coefficients& out) const;
  void adjoint_into(const Coefficients& s, std::size_t width, std::size_t height, std::span<double> out) const;

  /// Throws std::invalid_argument if the filters do not fit a width x height grid.
  void check_shape(std::size_t width, std::size_t height) const;

 private:
  void check_layout(const Coefficients& s, std::size_t n) const;

  AnalysisMode mode_;
  FilterBank dhf_;
  FilterBank dct_;
};

using LinearMap = std::function<std::vector<double>(std::span<const double>)>;

/// Lanczos iteration on A^T A from a seeded Gaussian start (power iteration
/// with a Ritz estimate; plain power iteration stalls near 1 - 1e-4 for the
/// tntf operator). Returns the estimate of ||A||_2 (0 for the zero operator).
double operator_norm(const LinearMap& apply, const LinearMap& adjoint, std::size_t n, std::size_t iters,
                     std::uint64_t seed);

double operator_norm(const BlurOperator& op, std::size_t width, std::size_t height, std::size_t iters,
                     std::uint64_t seed);
double operator_norm(const AnalysisOperator& op, std::size_t width, std::size_t height, std::size_t iters,
                     std::uint64_t seed);

}  // namespace tntf
