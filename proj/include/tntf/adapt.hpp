#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "tntf/framelet.hpp"
#include "tntf/prox.hpp"

namespace tntf {

/// Noise statistics of the second-level coefficients.
struct NoiseModel {
  double sigma = 0.0;
  std::array<double, 8> sigma_kappa_sq{};

  /// sigma_kappa^2 = sigma^2 * prefilter_energy * ||tau_kappa||_F^2.
  /// prefilter_energy is the squared Frobenius norm of whatever filter the
  /// image passes through before the bank: 1/4 for the DHF low-pass (the
  /// two-level system), 1 when the bank sees the image directly.
  static NoiseModel for_bank(double sigma, const FilterBank& bank, double prefilter_energy = 0.25);
};

inline constexpr double kDhfLowpassEnergy = 0.25;
inline constexpr double kWeightFloor = 1e-10;
inline constexpr std::size_t kUpdatePeriod = 30;
inline constexpr std::size_t kLastUpdate = 200;

/// lambda_i = base_lambda * |I(i)| / max(sum_{p in I(i)} ||w_p||, 1e-10), computed
/// separately for the diagonal and axis pairs over a periodic window.
GroupWeightMap estimate_lambda(std::span<const double> coeffs_s1, std::size_t width, std::size_t height,
                               double base_lambda, std::size_t window = 3);

/// theta_ik = sqrt(2) sigma_k^2 / sigma_i^k with
/// (sigma_i^k)^2 = max((mean_{I(i)} |v_p|)^2 - sigma_k^2, 1e-10).
SubbandWeightMap estimate_theta(std::span<const double> coeffs_s2, std::size_t width, std::size_t height,
                                const NoiseModel& noise, std::size_t window = 3);

/// True when the adaptive weights are (re)estimated before iteration k:
/// every 30 iterations up to and including k = 200.
constexpr bool update_schedule(std::size_t k) noexcept { return k % kUpdatePeriod == 0 && k <= kLastUpdate; }

/// Periodic window x window box sum of a width x height plane.
std::vector<double> periodic_box_sum(std::span<const double> plane, std::size_t width, std::size_t height,
                                     std::size_t window);

}  // namespace tntf
