#include "tntf/linops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tntf/rng.hpp"

namespace tntf {

BlurOperator::BlurOperator(Filter kernel) : kernel_(std::move(kernel)) {
  if (kernel_.taps.empty()) throw std::invalid_argument("BlurOperator: empty kernel");
}

BlurOperator BlurOperator::average(std::size_t size) {
  if (size == 0) throw std::invalid_argument("BlurOperator::average: size must be positive");
  const double tap = 1.0 / static_cast<double>(size * size);
  const int anchor = static_cast<int>(size / 2);
  return BlurOperator(Filter{size, size, std::vector<double>(size * size, tap), anchor, anchor});
}

Image BlurOperator::apply(const Image& img, bool adjoint) const {
  Image out(img.width(), img.height(), 0.0);
  apply_into(img.pixels(), img.width(), img.height(), adjoint, out.pixels());
  return out;
}

void BlurOperator::apply_into(std::span<const double> in, std::size_t width, std::size_t height, bool adjoint,
                              std::span<double> out) const {
  if (width < kernel_.extent() || height < kernel_.extent())
    throw std::invalid_argument("BlurOperator: image smaller than kernel");
  if (in.size() != width * height || out.size() != width * height)
    throw std::invalid_argument("BlurOperator: buffer size mismatch");
  std::fill(out.begin(), out.end(), 0.0);
  // Convolution is the synthesis form of convolve_periodic; correlation the analysis form.
  convolve_periodic_accumulate(in, width, height, kernel_, 1, !adjoint, out);
}

double dot(const Coefficients& a, const Coefficients& b) {
  if (!a.same_layout(b)) throw std::invalid_argument("Coefficients: layout mismatch");
  return dot(std::span<const double>(a.s1), std::span<const double>(b.s1)) +
         dot(std::span<const double>(a.s2), std::span<const double>(b.s2));
}

double squared_norm(const Coefficients& a) { return squared_norm(a.s1) + squared_norm(a.s2); }

void axpy(double alpha, const Coefficients& x, Coefficients& y) {
  if (!x.same_layout(y)) throw std::invalid_argument("Coefficients: layout mismatch");
  axpy(alpha, x.s1, y.s1);
  axpy(alpha, x.s2, y.s2);
}

std::string_view to_string(AnalysisMode mode) noexcept {
  switch (mode) {
    case AnalysisMode::tntf: return "tntf";
    case AnalysisMode::dhf_only: return "dhf-only";
    case AnalysisMode::dct_only: return "dct-only";
    case AnalysisMode::dhf_dct: return "dhf+dct";
  }
  return "?";
}

AnalysisOperator::AnalysisOperator(AnalysisMode mode, std::size_t dct_dilation)
    : mode_(mode), dhf_(dhf_bank(1)), dct_(dct_bank(dct_dilation)) {}

Coefficients AnalysisOperator::zeros(std::size_t n) const {
  return Coefficients{std::vector<double>(s1_planes() * n, 0.0), std::vector<double>(s2_planes() * n, 0.0)};
}

void AnalysisOperator::check_shape(std::size_t width, std::size_t height) const {
  if (has_s1()) check_filter_fits(dhf_.lowpass, dhf_.dilation, width, height);
  if (has_s2()) check_filter_fits(dct_.lowpass, dct_.dilation, width, height);
}

void AnalysisOperator::check_layout(const Coefficients& s, std::size_t n) const {
  if (s.s1.size() != s1_planes() * n || s.s2.size() != s2_planes() * n)
    throw std::invalid_argument("AnalysisOperator: coefficient block sizes do not match mode " +
                                std::string(to_string(mode_)));
}

void AnalysisOperator::apply_into(std::span<const double> in, std::size_t width, std::size_t height,
                                  Coefficients& out) const {
  const std::size_t n = width * height;
  if (in.size() != n) throw std::invalid_argument("AnalysisOperator: input size mismatch");
  check_shape(width, height);
  out.s1.assign(s1_planes() * n, 0.0);
  out.s2.assign(s2_planes() * n, 0.0);

  if (has_s1()) {
    for (std::size_t l = 0; l < dhf_.highpass.size(); ++l)
      convolve_periodic_accumulate(in, width, height, dhf_.highpass[l], dhf_.dilation, false,
                                   std::span<double>(out.s1).subspan(l * n, n));
  }
  if (has_s2()) {
    std::vector<double> smooth;
    std::span<const double> source = in;
    if (mode_ == AnalysisMode::tntf) {
      smooth.assign(n, 0.0);
      convolve_periodic_accumulate(in, width, height, dhf_.lowpass, dhf_.dilation, false, smooth);
      source = smooth;
    }
    for (std::size_t l = 0; l < dct_.highpass.size(); ++l)
      convolve_periodic_accumulate(source, width, height, dct_.highpass[l], dct_.dilation, false,
                                   std::span<double>(out.s2).subspan(l * n, n));
  }
}

void AnalysisOperator::adjoint_into(const Coefficients& s, std::size_t width, std::size_t height,
                                    std::span<double> out) const {
  const std::size_t n = width * height;
  if (out.size() != n) throw std::invalid_argument("AnalysisOperator: output size mismatch");
  check_layout(s, n);
  check_shape(width, height);
  std::fill(out.begin(), out.end(), 0.0);

  if (has_s1()) {
    for (std::size_t l = 0; l < dhf_.highpass.size(); ++l)
      convolve_periodic_accumulate(std::span<const double>(s.s1).subspan(l * n, n), width, height, dhf_.highpass[l],
                                   dhf_.dilation, true, out);
  }
  if (has_s2()) {
    if (mode_ == AnalysisMode::tntf) {
      std::vector<double> smooth(n, 0.0);
      for (std::size_t l = 0; l < dct_.highpass.size(); ++l)
        convolve_periodic_accumulate(std::span<const double>(s.s2).subspan(l * n, n), width, height,
                                     dct_.highpass[l], dct_.dilation, true, smooth);
      convolve_periodic_accumulate(smooth, width, height, dhf_.lowpass, dhf_.dilation, true, out);
    } else {
      for (std::size_t l = 0; l < dct_.highpass.size(); ++l)
        convolve_periodic_accumulate(std::span<const double>(s.s2).subspan(l * n, n), width, height,
                                     dct_.highpass[l], dct_.dilation, true, out);
    }
  }
}

Coefficients AnalysisOperator::apply(const Image& img) const {
  Coefficients out;
  apply_into(img.pixels(), img.width(), img.height(), out);
  return out;
}

Image AnalysisOperator::adjoint(const Coefficients& s, std::size_t width, std::size_t height) const {
  Image out(width, height, 0.0);
  adjoint_into(s, width, height, out.pixels());
  return out;
}

namespace {

// Largest eigenvalue of the symmetric tridiagonal matrix (alpha, beta) by
// Sturm-sequence bisection.
double largest_tridiagonal_eigenvalue(const std::vector<double>& alpha, const std::vector<double>& beta) {
  const std::size_t m = alpha.size();
  double lo = alpha[0], hi = alpha[0];
  for (std::size_t i = 0; i < m; ++i) {
    const double r = (i > 0 ? std::abs(beta[i - 1]) : 0.0) + (i + 1 < m ? std::abs(beta[i]) : 0.0);
    lo = std::min(lo, alpha[i] - r);
    hi = std::max(hi, alpha[i] + r);
  }
  // number of eigenvalues strictly below x
  auto count_below = [&](double x) {
    std::size_t count = 0;
    double d = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double b2 = i > 0 ? beta[i - 1] * beta[i - 1] : 0.0;
      d = alpha[i] - x - (i > 0 ? b2 / d : 0.0);
      if (d == 0.0) d = -1e-300;
      if (d < 0.0) ++count;
    }
    return count;
  };
  for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(hi), 1.0);
       ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(mid) == m) hi = mid;
    else lo = mid;
  }
  return hi;
}

}  // namespace

double operator_norm(const LinearMap& apply, const LinearMap& adjoint, std::size_t n, std::size_t iters,
                     std::uint64_t seed) {
  if (iters == 0) throw std::invalid_argument("operator_norm: iters must be at least 1");
  if (n == 0) return 0.0;
  std::vector<double> q(n), q_prev(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) q[i] = rng::counter_gaussian(seed, i);
  const double nq = norm2(q);
  for (double& x : q) x /= nq;

  // Lanczos on A^T A: the same Krylov space as power iteration, with the
  // Ritz value in place of the last Rayleigh quotient.
  std::vector<double> alpha, beta;
  double b = 0.0;
  for (std::size_t it = 0; it < std::min(iters, n); ++it) {
    auto z = adjoint(apply(q));
    double a = 0.0;
    for (std::size_t i = 0; i < n; ++i) a += z[i] * q[i];
    alpha.push_back(a);
    for (std::size_t i = 0; i < n; ++i) z[i] -= a * q[i] + b * q_prev[i];
    b = norm2(z);
    if (b <= 1e-13 * std::max(std::abs(a), 1e-300)) break;
    beta.push_back(b);
    q_prev.swap(q);
    for (std::size_t i = 0; i < n; ++i) q[i] = z[i] / b;
  }
  const double top = largest_tridiagonal_eigenvalue(alpha, beta);
  return top > 0.0 ? std::sqrt(top) : 0.0;
}

double operator_norm(const BlurOperator& op, std::size_t width, std::size_t height, std::size_t iters,
                     std::uint64_t seed) {
  const std::size_t n = width * height;
  auto fwd = [&](std::span<const double> x) {
    std::vector<double> y(n);
    op.apply_into(x, width, height, false, y);
    return y;
  };
  auto adj = [&](std::span<const double> x) {
    std::vector<double> y(n);
    op.apply_into(x, width, height, true, y);
    return y;
  };
  return operator_norm(fwd, adj, n, iters, seed);
}

double operator_norm(const AnalysisOperator& op, std::size_t width, std::size_t height, std::size_t iters,
                     std::uint64_t seed) {
  const std::size_t n = width * height;
  const std::size_t n1 = op.s1_planes() * n;
  auto fwd = [&](std::span<const double> x) {
    Coefficients c;
    op.apply_into(x, width, height, c);
    std::vector<double> flat(c.s1);
    flat.insert(flat.end(), c.s2.begin(), c.s2.end());
    return flat;
  };
  auto adj = [&](std::span<const double> flat) {
    Coefficients c{std::vector<double>(flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(n1)),
                   std::vector<double>(flat.begin() + static_cast<std::ptrdiff_t>(n1), flat.end())};
    std::vector<double> y(n);
    op.adjoint_into(c, width, height, y);
    return y;
  };
  return operator_norm(fwd, adj, n, iters, seed);
}

}  // namespace tntf
