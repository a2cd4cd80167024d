#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "tntf/prox.hpp"

using namespace tntf;

namespace {

// One pixel, six subbands, plane-major with n = 1.
std::vector<double> pixel(double x1, double x2, double x3, double x4, double x5, double x6) {
  return {x1, x2, x3, x4, x5, x6};
}

GroupWeightMap weights1(double diag, double axis) { return GroupWeightMap{{diag}, {axis}}; }

}  // namespace

TEST_CASE("box projection") {
  const auto y = project_box(std::vector<double>{1.3, -0.2, 0.42, 0.0, 1.0});
  CHECK(y == std::vector<double>{1.0, 0.0, 0.42, 0.0, 1.0});
}

TEST_CASE("group shrink examples") {
  auto y = prox_phi1(pixel(0.3, 0.4, 0.3, 0.4, 7, -8), weights1(0.25, 0.6), 1.0);
  CHECK(y[0] == doctest::Approx(0.15).epsilon(1e-15));
  CHECK(y[1] == doctest::Approx(0.20).epsilon(1e-15));
  CHECK(y[2] == 0.0);
  CHECK(y[3] == 0.0);
  CHECK(y[4] == 7);
  CHECK(y[5] == -8);

  const auto o = oracle::pair_l2_prox({0.3, 0.4}, 0.25);
  CHECK(std::abs(o[0] - 0.15) < 1e-6);
  CHECK(std::abs(o[1] - 0.20) < 1e-6);

  const auto v = pixel(0.1, -0.2, 0.3, 0.4, 0.5, 0.6);
  CHECK(prox_phi1(v, weights1(0, 0), 2.0) == v);
}

TEST_CASE("scale multiplies the threshold") {
  const auto a = prox_phi1(pixel(0.3, 0.4, 0, 0, 0, 0), weights1(0.125, 0), 2.0);
  CHECK(a[0] == doctest::Approx(0.15));
  const auto b = prox_phi2(std::vector<double>(8, -2.0), SubbandWeightMap::uniform(1, 0.25), 2.0);
  for (double x : b) CHECK(x == doctest::Approx(-1.5));
}

TEST_CASE("soft threshold examples") {
  CHECK(std::abs(oracle::scalar_l1_prox(-2.0, 0.5) - (-1.5)) < 1e-7);  // function-value search resolves to about sqrt(eps)
  CHECK(soft_threshold(-2.0, 0.5) == -1.5);
  CHECK(soft_threshold(0.3, 0.5) == 0.0);
  CHECK(soft_threshold(0.3, 0.0) == 0.3);
  std::vector<double> v{0.3, -0.7, 2, -2, 0.5, 0, 1e-3, -9};
  CHECK(prox_phi2(v, SubbandWeightMap::uniform(1, 0.0), 1.0) == v);
}

TEST_CASE("closed forms agree with numerical minimization") {
  oracle::Rand rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const double v = rng.uniform(-2, 2), t = rng.uniform(0, 1.5);
    CHECK(std::abs(soft_threshold(v, t) - oracle::scalar_l1_prox(v, t)) < 1e-6);

    const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2), tp = rng.uniform(0, 1.5);
    const auto y = prox_phi1(pixel(a, b, 0, 0, 0, 0), weights1(tp, 0), 1.0);
    const auto o = oracle::pair_l2_prox({a, b}, tp);
    CHECK(std::abs(y[0] - o[0]) < 1e-6);
    CHECK(std::abs(y[1] - o[1]) < 1e-6);
  }
}

TEST_CASE("TV penalties act on subbands 3 and 4 only") {
  const auto v = pixel(0.9, -0.9, 0.5, -0.2, 0.3, 0.3);
  const auto aniso = prox_phi1(v, weights1(99, 0.3), 1.0, GroupPenalty::tv_aniso);
  CHECK(aniso[0] == 0.9);
  CHECK(aniso[1] == -0.9);
  CHECK(aniso[2] == doctest::Approx(oracle::scalar_l1_prox(0.5, 0.3)).epsilon(1e-6));
  CHECK(aniso[3] == doctest::Approx(oracle::scalar_l1_prox(-0.2, 0.3)).epsilon(1e-6));

  const auto iso = prox_phi1(v, weights1(99, 0.3), 1.0, GroupPenalty::tv_iso);
  const auto o = oracle::pair_l2_prox({0.5, -0.2}, 0.3);
  CHECK(iso[0] == 0.9);
  CHECK(std::abs(iso[2] - o[0]) < 1e-6);
  CHECK(std::abs(iso[3] - o[1]) < 1e-6);

  CHECK(phi1_value(v, weights1(2, 3), GroupPenalty::tv_aniso) == doctest::Approx(3 * 0.7));
  CHECK(phi1_value(v, weights1(2, 3), GroupPenalty::tv_iso) == doctest::Approx(3 * std::hypot(0.5, 0.2)));
  CHECK(phi1_value(v, weights1(2, 3)) == doctest::Approx(2 * std::hypot(0.9, 0.9) + 3 * std::hypot(0.5, 0.2)));
}

TEST_CASE("penalty values") {
  const std::vector<double> v{1, -2, 0, 0.5, 0, 0, 0, 3};
  SubbandWeightMap w = SubbandWeightMap::uniform(1, 0.5);
  w.theta[7] = 2;
  CHECK(phi2_value(v, w) == doctest::Approx(0.5 * 3.5 + 6));
}

TEST_CASE("invalid arguments") {
  const auto v = pixel(1, 1, 1, 1, 1, 1);
  CHECK_THROWS_AS(prox_phi1(v, weights1(-1, 0), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(prox_phi1(v, weights1(1, 0), -1.0), std::invalid_argument);
  CHECK_THROWS_AS(prox_phi1(v, weights1(1, 0), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(prox_phi1(std::vector<double>(5), weights1(1, 0), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(prox_phi2(std::vector<double>(8), SubbandWeightMap::uniform(1, -0.1), 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(prox_phi2(std::vector<double>(7), SubbandWeightMap::uniform(1, 0.1), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(prox_conjugate([](std::span<const double> x) { return std::vector<double>(x.begin(), x.end()); },
                                 std::vector<double>{1.0}, 0.0),
                  std::invalid_argument);
}

TEST_CASE("Moreau identity and conjugate proxes") {
  oracle::Rand rng(77);
  const std::size_t n = 50;
  GroupWeightMap lam{rng.vector(n, 0, 0.5), rng.vector(n, 0, 0.5)};
  SubbandWeightMap theta{rng.vector(8 * n, 0, 0.5)};
  for (const double delta : {0.5, 1.0, 3.0}) {
    const auto t1 = rng.vector(6 * n, -2, 2);
    const ProxFn p1 = [&](std::span<const double> x) { return prox_phi1(x, lam, 1.0 / delta); };
    const auto c1 = prox_conjugate(p1, t1, delta);
    std::vector<double> scaled(t1.size());
    for (std::size_t i = 0; i < t1.size(); ++i) scaled[i] = t1[i] / delta;
    const auto d1 = p1(scaled);
    for (std::size_t i = 0; i < t1.size(); ++i) CHECK(std::abs(c1[i] + delta * d1[i] - t1[i]) <= 1e-14);

    // conjugate of a group norm is the indicator of a ball: the output is t
    // projected onto the radius-lambda disk per pair
    for (std::size_t i = 0; i < n; ++i) {
      const double a = t1[i], b = t1[n + i];
      const double scale = std::min(1.0, lam.lambda_diag[i] / std::max(std::hypot(a, b), 1e-300));
      CHECK(c1[i] == doctest::Approx(a * scale).epsilon(1e-12));
      CHECK(c1[n + i] == doctest::Approx(b * scale).epsilon(1e-12));
      CHECK(c1[4 * n + i] == doctest::Approx(0.0));  // unpenalized subbands: conjugate is {0}
    }
  }

  // delta = 1 with soft thresholding: clamp to [-theta, theta]
  const auto t2 = rng.vector(8 * n, -1, 1);
  const auto c2 = prox_conjugate([&](std::span<const double> x) { return prox_phi2(x, theta, 1.0); }, t2, 1.0);
  for (std::size_t i = 0; i < t2.size(); ++i)
    CHECK(c2[i] == doctest::Approx(std::clamp(t2[i], -theta.theta[i], theta.theta[i])).epsilon(1e-15));

  // p = 0: the direct prox is the identity and the conjugate prox is zero
  const auto c0 = prox_conjugate([](std::span<const double> x) { return std::vector<double>(x.begin(), x.end()); },
                                 t2, 0.7);
  for (double x : c0) CHECK(std::abs(x) < 1e-15);
}

TEST_CASE("proxes are firmly nonexpansive") {
  oracle::Rand rng(5);
  const std::size_t n = 40;
  const GroupWeightMap lam{rng.vector(n, 0, 0.3), rng.vector(n, 0, 0.3)};
  const SubbandWeightMap theta{rng.vector(8 * n, 0, 0.3)};
  for (int trial = 0; trial < 20; ++trial) {
    for (const auto penalty : {GroupPenalty::dhf, GroupPenalty::tv_aniso, GroupPenalty::tv_iso}) {
      const auto a = rng.vector(6 * n), b = rng.vector(6 * n);
      const auto pa = prox_phi1(a, lam, 1.3, penalty), pb = prox_phi1(b, lam, 1.3, penalty);
      double lhs = 0.0, rhs = 0.0, dist = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        lhs += (pa[i] - pb[i]) * (pa[i] - pb[i]);
        rhs += (pa[i] - pb[i]) * (a[i] - b[i]);
        dist += (a[i] - b[i]) * (a[i] - b[i]);
      }
      CHECK(lhs <= rhs + 1e-12);
      CHECK(lhs <= dist + 1e-12);
    }
    const auto a = rng.vector(8 * n), b = rng.vector(8 * n);
    const auto pa = prox_phi2(a, theta, 0.8), pb = prox_phi2(b, theta, 0.8);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      lhs += (pa[i] - pb[i]) * (pa[i] - pb[i]);
      rhs += (pa[i] - pb[i]) * (a[i] - b[i]);
    }
    CHECK(lhs <= rhs + 1e-12);
  }
}

TEST_CASE("pixel permutations commute with the prox") {
  oracle::Rand rng(9);
  const std::size_t n = 30;
  const GroupWeightMap lam{rng.vector(n, 0, 0.4), rng.vector(n, 0, 0.4)};
  const auto v = rng.vector(6 * n);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[static_cast<std::size_t>(rng.uniform() * (i + 1))]);

  GroupWeightMap lam_p{std::vector<double>(n), std::vector<double>(n)};
  std::vector<double> v_p(6 * n);
  for (std::size_t i = 0; i < n; ++i) {
    lam_p.lambda_diag[i] = lam.lambda_diag[perm[i]];
    lam_p.lambda_axis[i] = lam.lambda_axis[perm[i]];
    for (std::size_t l = 0; l < 6; ++l) v_p[l * n + i] = v[l * n + perm[i]];
  }
  const auto y = prox_phi1(v, lam, 1.0), y_p = prox_phi1(v_p, lam_p, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < 6; ++l) CHECK(y_p[l * n + i] == y[l * n + perm[i]]);
}

TEST_CASE("optimality certificate") {
  oracle::Rand rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2), t = rng.uniform(0, 1);
    const auto y = prox_phi1(pixel(a, b, 0, 0, 0, 0), weights1(t, 0), 1.0);
    const double norm = std::hypot(y[0], y[1]);
    if (norm > 1e-12) {
      CHECK(std::abs(y[0] - a + t * y[0] / norm) <= 1e-10);
      CHECK(std::abs(y[1] - b + t * y[1] / norm) <= 1e-10);
    } else {
      CHECK(std::hypot(a, b) <= t + 1e-12);  // 0 in v - y + t * unit ball
    }
  }
}
