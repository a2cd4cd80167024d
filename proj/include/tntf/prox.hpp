#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace tntf {

/// Per-pixel weights for the first-level penalty. lambda_diag weighs the
/// diagonal pair (subbands 1,2), lambda_axis the axis pair (subbands 3,4).
struct GroupWeightMap {
  std::vector<double> lambda_diag;
  std::vector<double> lambda_axis;

  static GroupWeightMap uniform(std::size_t n, double value);
  std::size_t pixels() const noexcept { return lambda_axis.size(); }
};

/// Per-pixel, per-subband weights theta for the eight DCT high-pass planes,
/// plane-major like the coefficients they weigh.
struct SubbandWeightMap {
  std::vector<double> theta;

  static SubbandWeightMap uniform(std::size_t n, double value);
};

/// Form of the per-pixel function applied to the six DHF coefficients.
enum class GroupPenalty {
  dhf,       // ||(x1,x2)|| + ||(x3,x4)||
  tv_aniso,  // |x3| + |x4|
  tv_iso,    // ||(x3,x4)||
};

std::vector<double> project_box(std::span<const double> v);
void project_box_inplace(std::span<double> v);

/// prox of scale * Phi1 on a 6n plane-major vector. Subbands 5 and 6 carry
/// no penalty and pass through.
std::vector<double> prox_phi1(std::span<const double> v, const GroupWeightMap& weights, double scale,
                              GroupPenalty penalty = GroupPenalty::dhf);

/// prox of scale * Phi2 on an 8n vector: soft thresholding at theta * scale.
std::vector<double> prox_phi2(std::span<const double> v, const SubbandWeightMap& weights, double scale);

double phi1_value(std::span<const double> v, const GroupWeightMap& weights, GroupPenalty penalty = GroupPenalty::dhf);
double phi2_value(std::span<const double> v, const SubbandWeightMap& weights);

using ProxFn = std::function<std::vector<double>(std::span<const double>)>;

/// Moreau identity: given prox_direct = prox_{p/delta}, returns
/// prox_{delta p*}(t) = t - delta * prox_direct(t / delta).
std::vector<double> prox_conjugate(const ProxFn& prox_direct, std::span<const double> t, double delta);

/// Scalar soft threshold.
inline double soft_threshold(double x, double t) noexcept {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

}  // namespace tntf
