#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "test_util.hpp"
#include "tntf/sim.hpp"
#include "tntf/solver.hpp"
#include "tntf/synthetic.hpp"

using namespace tntf;

namespace {

BlurOperator identity_blur() { return BlurOperator(Filter{1, 1, {1.0}, 0, 0}); }

Image standard_observation(std::size_t size, double sigma) {
  return degrade(make_synthetic(SyntheticKind::square_circle, size, 0), {BlurKernel::average5, sigma, 0});
}

// Random state with v spread beyond [0,1] so the projection is active.
SolverState random_state(const RestorationProblem& p, std::uint64_t seed) {
  oracle::Rand rng(seed);
  SolverState st = initial_state(p);
  for (double& x : st.v) x = rng.uniform(-0.3, 1.3);
  for (double& x : st.s.s1) x = rng.uniform(-0.01, 0.01);
  for (double& x : st.s.s2) x = rng.uniform(-0.01, 0.01);
  st.at_s.clear();
  return st;
}

}  // namespace

TEST_CASE("mode names") {
  for (const auto mode : {RegularizerMode::tntf, RegularizerMode::tv_aniso, RegularizerMode::tv_iso,
                          RegularizerMode::dct_only, RegularizerMode::dhf_dct})
    CHECK(parse_regularizer_mode(to_string(mode)) == mode);
  CHECK(parse_regularizer_mode("dct-only") == RegularizerMode::dct_only);
  CHECK_THROWS(parse_regularizer_mode("tgv"));
  CHECK(analysis_mode_for(RegularizerMode::tv_iso) == AnalysisMode::dhf_only);
  CHECK(analysis_mode_for(RegularizerMode::dct_only) == AnalysisMode::dct_only);
  CHECK_FALSE(uses_theta(RegularizerMode::tv_aniso));
  CHECK_FALSE(uses_lambda(RegularizerMode::dct_only));
}

TEST_CASE("configuration validation") {
  SolverConfig cfg;
  CHECK(cfg.gamma == 1.99);
  CHECK(cfg.delta == 0.5);
  CHECK(cfg.max_iters == 400);
  CHECK(cfg.rel_tol == 1e-9);
  CHECK_NOTHROW(validate(cfg));
  auto bad = [&](auto mutate) {
    SolverConfig c;
    mutate(c);
    return c;
  };
  CHECK_THROWS(validate(bad([](SolverConfig& c) { c.delta = 0.51; })));  // gamma*delta >= 1
  CHECK_THROWS(validate(bad([](SolverConfig& c) { c.gamma = 0; })));
  CHECK_THROWS(validate(bad([](SolverConfig& c) { c.delta = -1; })));
  CHECK_THROWS(validate(bad([](SolverConfig& c) { c.max_iters = 0; })));
  CHECK_THROWS(validate(bad([](SolverConfig& c) { c.param_window = 4; })));
  CHECK_THROWS(validate(bad([](SolverConfig& c) { c.sigma = -0.1; })));
  CHECK_THROWS(validate(bad([](SolverConfig& c) { c.base_lambda = NAN; })));
}

TEST_CASE("gamma must respect the blur Lipschitz constant") {
  SolverConfig cfg;
  cfg.gamma = 3.0;
  cfg.delta = 0.2;
  cfg.mode = RegularizerMode::tv_iso;
  cfg.base_lambda = 0.01;
  CHECK_THROWS_AS(restore(standard_observation(32, 0.02), cfg), std::invalid_argument);
}

TEST_CASE("m-norm") {
  const AnalysisOperator A(AnalysisMode::tntf);
  const std::size_t w = 16, h = 16, n = w * h;
  oracle::Rand rng(1);
  const auto dv = rng.vector(n);

  SUBCASE("ds = 0 gives the Euclidean norm") {
    CHECK(m_norm(dv, A.zeros(n), A, w, h, 1.99, 0.5) == doctest::Approx(norm2(dv)).epsilon(1e-14));
  }

  SUBCASE("ds in the null space of A^T") {
    Coefficients s = A.zeros(n);
    for (double& x : s.s1) x = rng.uniform(-1, 1);
    for (double& x : s.s2) x = rng.uniform(-1, 1);
    const auto normal = [&](const std::vector<double>& x) {
      return A.adjoint(A.apply(Image(w, h, x)), w, h).vector();
    };
    const auto y = oracle::conjugate_gradient(normal, A.adjoint(s, w, h).vector(), 2000, 1e-14);
    const auto ay = A.apply(Image(w, h, y));
    axpy(-1.0, ay, s);
    CHECK(norm2(A.adjoint(s, w, h).pixels()) < 1e-10 * std::sqrt(squared_norm(s)));
    const std::vector<double> zero(n, 0.0);
    CHECK(m_norm(zero, s, A, w, h, 1.99, 0.5) == doctest::Approx(std::sqrt(1.99 / 0.5 * squared_norm(s))).epsilon(1e-9));
  }

  SUBCASE("positive for gamma*delta close to one") {
    for (int trial = 0; trial < 10; ++trial) {
      Coefficients s = A.zeros(n);
      for (double& x : s.s1) x = rng.uniform(-1, 1);
      const std::vector<double> zero(n, 0.0);
      CHECK(m_norm(zero, s, A, w, h, 1.99, 0.995 / 1.99) > 0.0);
    }
  }

  CHECK_THROWS_AS(m_norm(dv, A.zeros(n), A, w, h, 2.0, 0.5), std::invalid_argument);
}

TEST_CASE("one PD3O step follows the update equations") {
  const Image z = standard_observation(32, 0.03);
  SolverConfig cfg;
  cfg.sigma = 0.03;
  const RestorationProblem p = make_problem(z, cfg);
  SolverState st = random_state(p, 4);
  const SolverState before = st;
  const double g = cfg.gamma, d = cfg.delta;
  const std::size_t w = 32, h = 32, n = w * h;

  Image u(w, h, before.v);
  project_box_inplace(u.pixels());
  std::vector<double> r = p.K.apply(u).vector();
  for (std::size_t i = 0; i < n; ++i) r[i] -= z.pixels()[i];
  const std::vector<double> grad = p.K.apply(Image(w, h, r), true).vector();
  const std::vector<double> at_s = p.A.adjoint(before.s, w, h).vector();

  // s - delta A x via its expanded form (I - gamma delta A A^T) s + delta A (2u - v - gamma grad)
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = 2 * u.pixels()[i] - before.v[i] - g * grad[i];
  Coefficients t = before.s;
  axpy(-g * d, p.A.apply(Image(w, h, at_s)), t);
  axpy(d, p.A.apply(Image(w, h, y)), t);

  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = g * at_s[i] - (2 * u.pixels()[i] - before.v[i]) + g * grad[i];
  Coefficients t2 = before.s;
  axpy(-d, p.A.apply(Image(w, h, x)), t2);
  for (std::size_t i = 0; i < t.s1.size(); ++i) CHECK(std::abs(t.s1[i] - t2.s1[i]) < 1e-12);
  for (std::size_t i = 0; i < t.s2.size(); ++i) CHECK(std::abs(t.s2[i] - t2.s2[i]) < 1e-12);

  const Coefficients s_next = p.prox_conjugate(t, d);
  const std::vector<double> at_next = p.A.adjoint(s_next, w, h).vector();

  pd3o_step(st, p, g, d);
  REQUIRE(st.k == 1);
  REQUIRE(st.history.size() == 1);
  for (std::size_t i = 0; i < s_next.s1.size(); ++i) CHECK(std::abs(st.s.s1[i] - s_next.s1[i]) < 1e-12);
  for (std::size_t i = 0; i < s_next.s2.size(); ++i) CHECK(std::abs(st.s.s2[i] - s_next.s2[i]) < 1e-12);
  for (std::size_t i = 0; i < n; ++i)
    CHECK(std::abs(st.v[i] - (u.pixels()[i] - g * grad[i] - g * at_next[i])) < 1e-12);

  CHECK(st.history[0].objective == doctest::Approx(objective(p, u)).epsilon(1e-12));
  std::vector<double> dv(n);
  for (std::size_t i = 0; i < n; ++i) dv[i] = st.v[i] - before.v[i];
  Coefficients ds = st.s;
  axpy(-1.0, before.s, ds);
  CHECK(st.history[0].m_norm_step == doctest::Approx(m_norm(dv, ds, p.A, w, h, g, d)).epsilon(1e-9));

  // the value-returning overload agrees
  const SolverState again = pd3o_step(before, p, cfg);
  CHECK(again.v == st.v);
}

TEST_CASE("iterates stay in the box") {
  const Image z = standard_observation(32, 0.04);
  SolverConfig cfg;
  cfg.sigma = 0.04;
  const RestorationProblem p = make_problem(z, cfg);
  SolverState st = initial_state(p);
  for (int k = 0; k < 60; ++k) {
    pd3o_step(st, p, cfg.gamma, cfg.delta);
    for (double x : st.u.pixels()) REQUIRE((x >= 0.0 && x <= 1.0));
  }
}

TEST_CASE("non-finite iterates raise a divergence error") {
  Image z(16, 16, 0.5);
  z(3, 3) = NAN;
  RestorationProblem p(z, BlurOperator::average(), AnalysisOperator(AnalysisMode::dhf_only), GroupPenalty::tv_aniso);
  p.lambda = GroupWeightMap::uniform(z.size(), 0.01);
  SolverState st = initial_state(p);
  CHECK_THROWS_AS(pd3o_step(st, p, 1.0, 0.5), DivergenceError);

  SolverConfig cfg;
  cfg.mode = RegularizerMode::tv_aniso;
  CHECK_THROWS_AS(restore(z, cfg), std::invalid_argument);
}

TEST_CASE("identity blur without regularization returns the clipped observation") {
  const Image z = testutil::random_image(12, 12, 5, -0.2, 1.2);
  SolverConfig cfg;
  cfg.mode = RegularizerMode::tv_aniso;
  cfg.base_lambda = 0.0;
  cfg.gamma = 1.0;
  cfg.max_iters = 2000;
  cfg.rel_tol = 1e-14;
  const auto res = restore(z, cfg, identity_blur());
  for (std::size_t i = 0; i < z.size(); ++i)
    CHECK(res.image.pixels()[i] == doctest::Approx(std::clamp(z.pixels()[i], 0.0, 1.0)).epsilon(1e-9));
}

TEST_CASE("standard tntf run") {
  const Image z = standard_observation(64, 0.02);
  SolverConfig cfg;
  cfg.sigma = 0.02;
  cfg.base_lambda = 2e-4;
  const auto a = restore(z, cfg);
  CHECK(a.iterations == 400);
  CHECK_FALSE(a.converged);
  CHECK(std::isfinite(a.final_objective));
  for (double x : a.image.pixels()) CHECK((x >= 0.0 && x <= 1.0));
  CHECK(a.final_objective <= a.history.front().objective);
  CHECK(a.blur_norm == doctest::Approx(1.0).epsilon(1e-6));

  const auto b = restore(z, cfg);
  CHECK(a.image == b.image);
  CHECK(a.history.back().objective == b.history.back().objective);

  // adaptive weights moved away from the ones estimated on z
  const auto p = make_problem(z, cfg);
  CHECK(p.lambda.lambda_axis != a.lambda.lambda_axis);
  cfg.freeze_params = true;
  cfg.max_iters = 40;
  const auto frozen = restore(z, cfg);
  CHECK(frozen.lambda.lambda_axis == p.lambda.lambda_axis);
  CHECK(frozen.theta.theta == p.theta.theta);
}

TEST_CASE("monotone steps with frozen weights") {
  const Image z = standard_observation(32, 0.03);
  for (const auto mode : {RegularizerMode::tntf, RegularizerMode::tv_iso, RegularizerMode::dct_only}) {
    SolverConfig cfg;
    cfg.mode = mode;
    cfg.sigma = 0.03;
    cfg.base_lambda = mode == RegularizerMode::tntf ? 2e-4 : 0.01;
    cfg.freeze_params = true;
    cfg.rel_tol = 0.0;
    cfg.max_iters = 200;
    const auto res = restore(z, cfg);
    std::size_t violations = 0;
    for (std::size_t k = 1; k < res.history.size(); ++k)
      violations += res.history[k].m_norm_step > res.history[k - 1].m_norm_step * (1 + 1e-12);
    CHECK(violations == 0);
    const auto& hs = res.history;
    CHECK(200 * hs[199].m_norm_step * hs[199].m_norm_step < 20 * hs[19].m_norm_step * hs[19].m_norm_step);
  }
}

TEST_CASE("a converged state is a fixed point") {
  const Image z = standard_observation(32, 0.02);
  SolverConfig cfg;
  cfg.mode = RegularizerMode::tv_aniso;
  cfg.base_lambda = 0.01;
  const RestorationProblem p = make_problem(z, cfg);
  SolverState st = initial_state(p);
  for (int k = 0; k < 20000; ++k) {
    pd3o_step(st, p, cfg.gamma, cfg.delta);
    if (st.history.back().rel_change < 1e-14) break;
  }
  pd3o_step(st, p, cfg.gamma, cfg.delta);
  CHECK(st.history.back().m_norm_step < 1e-8);
}

TEST_CASE("dhf+dct rescales the dual step") {
  const Image z = standard_observation(32, 0.02);
  SolverConfig cfg;
  cfg.mode = RegularizerMode::dhf_dct;
  cfg.sigma = 0.02;
  cfg.max_iters = 5;
  const auto res = restore(z, cfg);
  CHECK(res.delta_used < cfg.delta);
  CHECK(res.delta_used >= cfg.delta / 2.0 - 1e-12);
  cfg.mode = RegularizerMode::tntf;
  CHECK(restore(z, cfg).delta_used == cfg.delta);
}

TEST_CASE("every mode runs on a small image") {
  const Image z = standard_observation(32, 0.02);
  for (const auto mode : {RegularizerMode::tntf, RegularizerMode::tv_aniso, RegularizerMode::tv_iso,
                          RegularizerMode::dct_only, RegularizerMode::dhf_dct}) {
    SolverConfig cfg;
    cfg.mode = mode;
    cfg.sigma = 0.02;
    cfg.base_lambda = uses_theta(mode) ? 2e-4 : 0.01;
    cfg.max_iters = 50;
    const auto res = restore(z, cfg);
    CHECK(res.iterations == 50);
    CHECK(all_finite(res.image.pixels()));
    CHECK(res.final_objective < res.history.front().objective);
  }
}

TEST_CASE("small anisotropic TV instance matches an independent solver") {
  const std::size_t w = 8, h = 8;
  oracle::Rand rng(42);
  std::vector<double> truth(w * h);
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c) truth[r * w + c] = (r >= 2 && r < 6 && c >= 3) ? 0.8 : 0.2;
  auto z = oracle::box_blur(truth, w, h, 5);
  for (double& x : z) x += 0.05 * rng.gauss();
  const double lambda = 0.02;

  const auto ref = oracle::tv_aniso_deblur(z, w, h, lambda, 5, 1e-10, 200000);
  REQUIRE(ref.rel_change < 1e-10);

  SolverConfig cfg;
  cfg.mode = RegularizerMode::tv_aniso;
  cfg.base_lambda = lambda;
  cfg.rel_tol = 1e-10;
  cfg.max_iters = 200000;
  const auto res = restore(Image(w, h, z), cfg);
  REQUIRE(res.converged);
  const double ours = oracle::tv_aniso_objective(res.image.vector(), z, w, h, lambda, 5);
  CHECK(ours == doctest::Approx(res.final_objective).epsilon(1e-12));
  CHECK(std::abs(ours - ref.objective) <= 1e-4 * ref.objective);
}

TEST_CASE("history CSV") {
  std::ostringstream out;
  write_history_csv(out, {IterationRecord{0, 2.5, 0.5, 0.25}, IterationRecord{1, 2.0, 0.25, 0.125}});
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "k,objective,rel_change,m_norm_step");
  std::getline(in, line);
  CHECK(line.rfind("0,2.5,0.25,0.5", 0) == 0);
}
