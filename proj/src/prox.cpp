#include "tntf/prox.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tntf {
namespace {

constexpr std::size_t kDhfPlanes = 6;
constexpr std::size_t kDctPlanes = 8;

void require_nonnegative(std::span<const double> w, const char* what) {
  for (double x : w)
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": weights must be finite and >= 0");
}

void require_scale(double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("prox: scale must be positive");
}

// Shrinks (a, b) toward zero by t in Euclidean norm.
inline void group_shrink(double& a, double& b, double t) noexcept {
  if (t == 0.0) return;
  const double norm = std::hypot(a, b);
  const double factor = 1.0 - t / std::max(norm, t);
  a *= factor;
  b *= factor;
}

}  // namespace

GroupWeightMap GroupWeightMap::uniform(std::size_t n, double value) {
  return GroupWeightMap{std::vector<double>(n, value), std::vector<double>(n, value)};
}

SubbandWeightMap SubbandWeightMap::uniform(std::size_t n, double value) {
  return SubbandWeightMap{std::vector<double>(kDctPlanes * n, value)};
}

std::vector<double> project_box(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  project_box_inplace(out);
  return out;
}

void project_box_inplace(std::span<double> v) {
  for (double& x : v) x = std::clamp(x, 0.0, 1.0);
}

std::vector<double> prox_phi1(std::span<const double> v, const GroupWeightMap& weights, double scale,
                              GroupPenalty penalty) {
  require_scale(scale);
  const std::size_t n = weights.pixels();
  if (weights.lambda_diag.size() != n || v.size() != kDhfPlanes * n)
    throw std::invalid_argument("prox_phi1: expected 6n coefficients and n weights per group");
  require_nonnegative(weights.lambda_diag, "prox_phi1");
  require_nonnegative(weights.lambda_axis, "prox_phi1");

  std::vector<double> y(v.begin(), v.end());
  double* x1 = y.data();
  double* x2 = x1 + n;
  double* x3 = x2 + n;
  double* x4 = x3 + n;
  for (std::size_t i = 0; i < n; ++i) {
    const double t_axis = weights.lambda_axis[i] * scale;
    switch (penalty) {
      case GroupPenalty::dhf:
        group_shrink(x1[i], x2[i], weights.lambda_diag[i] * scale);
        group_shrink(x3[i], x4[i], t_axis);
        break;
      case GroupPenalty::tv_aniso:
        x3[i] = soft_threshold(x3[i], t_axis);
        x4[i] = soft_threshold(x4[i], t_axis);
        break;
      case GroupPenalty::tv_iso:
        group_shrink(x3[i], x4[i], t_axis);
        break;
    }
  }
  return y;
}

std::vector<double> prox_phi2(std::span<const double> v, const SubbandWeightMap& weights, double scale) {
  require_scale(scale);
  if (weights.theta.size() != v.size() || v.size() % kDctPlanes != 0)
    throw std::invalid_argument("prox_phi2: expected 8n coefficients and 8n weights");
  require_nonnegative(weights.theta, "prox_phi2");
  std::vector<double> y(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) y[i] = soft_threshold(v[i], weights.theta[i] * scale);
  return y;
}

double phi1_value(std::span<const double> v, const GroupWeightMap& weights, GroupPenalty penalty) {
  const std::size_t n = weights.pixels();
  if (v.size() != kDhfPlanes * n) throw std::invalid_argument("phi1_value: expected 6n coefficients");
  const double* x1 = v.data();
  const double* x2 = x1 + n;
  const double* x3 = x2 + n;
  const double* x4 = x3 + n;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    switch (penalty) {
      case GroupPenalty::dhf:
        acc += weights.lambda_diag[i] * std::hypot(x1[i], x2[i]) + weights.lambda_axis[i] * std::hypot(x3[i], x4[i]);
        break;
      case GroupPenalty::tv_aniso:
        acc += weights.lambda_axis[i] * (std::abs(x3[i]) + std::abs(x4[i]));
        break;
      case GroupPenalty::tv_iso:
        acc += weights.lambda_axis[i] * std::hypot(x3[i], x4[i]);
        break;
    }
  }
  return acc;
}

double phi2_value(std::span<const double> v, const SubbandWeightMap& weights) {
  if (weights.theta.size() != v.size()) throw std::invalid_argument("phi2_value: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += weights.theta[i] * std::abs(v[i]);
  return acc;
}

std::vector<double> prox_conjugate(const ProxFn& prox_direct, std::span<const double> t, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("prox_conjugate: delta must be positive");
  std::vector<double> scaled(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) scaled[i] = t[i] / delta;
  auto y = prox_direct(scaled);
  if (y.size() != t.size()) throw std::invalid_argument("prox_conjugate: delegate changed the vector length");
  for (std::size_t i = 0; i < t.size(); ++i) y[i] = t[i] - delta * y[i];
  return y;
}

}  // namespace tntf
