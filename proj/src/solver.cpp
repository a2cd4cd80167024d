#include "tntf/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include "tntf/adapt.hpp"

namespace tntf {
namespace {

constexpr std::size_t kNormIterations = 100;
constexpr double kRelChangeFloor = 1e-30;

double m_norm_from_parts(double dv_sq, double ds_sq, double at_ds_sq, double gamma, double delta) {
  const double dual = std::max(ds_sq - gamma * delta * at_ds_sq, 0.0);
  return std::sqrt(dv_sq + (gamma / delta) * dual);
}

void check_finite(std::span<const double> values, std::size_t k, const char* what) {
  if (!all_finite(values))
    throw DivergenceError(k, std::string("PD3O diverged: non-finite ") + what + " at iteration " + std::to_string(k));
}

}  // namespace

std::string_view to_string(RegularizerMode mode) noexcept {
  switch (mode) {
    case RegularizerMode::tntf: return "tntf";
    case RegularizerMode::tv_aniso: return "tv-aniso";
    case RegularizerMode::tv_iso: return "tv-iso";
    case RegularizerMode::dct_only: return "dct";
    case RegularizerMode::dhf_dct: return "dhf+dct";
  }
  return "?";
}

RegularizerMode parse_regularizer_mode(std::string_view name) {
  if (name == "tntf") return RegularizerMode::tntf;
  if (name == "tv-aniso") return RegularizerMode::tv_aniso;
  if (name == "tv-iso") return RegularizerMode::tv_iso;
  if (name == "dct" || name == "dct-only") return RegularizerMode::dct_only;
  if (name == "dhf+dct") return RegularizerMode::dhf_dct;
  throw std::invalid_argument("unknown mode: " + std::string(name));
}

AnalysisMode analysis_mode_for(RegularizerMode mode) noexcept {
  switch (mode) {
    case RegularizerMode::tntf: return AnalysisMode::tntf;
    case RegularizerMode::dhf_dct: return AnalysisMode::dhf_dct;
    case RegularizerMode::dct_only: return AnalysisMode::dct_only;
    case RegularizerMode::tv_aniso:
    case RegularizerMode::tv_iso: return AnalysisMode::dhf_only;
  }
  return AnalysisMode::tntf;
}

GroupPenalty penalty_for(RegularizerMode mode) noexcept {
  switch (mode) {
    case RegularizerMode::tv_aniso: return GroupPenalty::tv_aniso;
    case RegularizerMode::tv_iso: return GroupPenalty::tv_iso;
    default: return GroupPenalty::dhf;
  }
}

bool uses_lambda(RegularizerMode mode) noexcept { return mode != RegularizerMode::dct_only; }
bool uses_theta(RegularizerMode mode) noexcept {
  return mode == RegularizerMode::tntf || mode == RegularizerMode::dhf_dct || mode == RegularizerMode::dct_only;
}
bool adaptive_lambda(RegularizerMode mode) noexcept {
  return mode == RegularizerMode::tntf || mode == RegularizerMode::dhf_dct;
}

void validate(const SolverConfig& cfg) {
  if (!(cfg.gamma > 0.0) || !std::isfinite(cfg.gamma)) throw std::invalid_argument("gamma must be positive");
  if (!(cfg.delta > 0.0) || !std::isfinite(cfg.delta)) throw std::invalid_argument("delta must be positive");
  if (!(cfg.gamma * cfg.delta < 1.0)) throw std::invalid_argument("gamma * delta must be < 1");
  if (cfg.max_iters == 0) throw std::invalid_argument("max_iters must be at least 1");
  if (!(cfg.rel_tol >= 0.0)) throw std::invalid_argument("rel_tol must be >= 0");
  if (!(cfg.base_lambda >= 0.0) || !std::isfinite(cfg.base_lambda))
    throw std::invalid_argument("lambda must be finite and >= 0");
  if (!(cfg.sigma >= 0.0) || !std::isfinite(cfg.sigma)) throw std::invalid_argument("sigma must be finite and >= 0");
  if (cfg.param_window == 0 || cfg.param_window % 2 == 0)
    throw std::invalid_argument("param_window must be an odd positive integer");
  if (cfg.dct_dilation == 0) throw std::invalid_argument("dct_dilation must be positive");
}

RestorationProblem::RestorationProblem(Image observation, BlurOperator blur, AnalysisOperator analysis,
                                       GroupPenalty group_penalty)
    : z(std::move(observation)), K(std::move(blur)), A(std::move(analysis)), penalty(group_penalty) {
  const std::size_t n = z.size();
  A.check_shape(z.width(), z.height());
  lambda = A.has_s1() ? GroupWeightMap::uniform(n, 0.0) : GroupWeightMap{};
  theta = A.has_s2() ? SubbandWeightMap::uniform(n, 0.0) : SubbandWeightMap{};
}

Coefficients RestorationProblem::prox_conjugate(const Coefficients& t, double delta) const {
  Coefficients out;
  const double scale = 1.0 / delta;
  if (!t.s1.empty())
    out.s1 = tntf::prox_conjugate(
        [&](std::span<const double> x) { return prox_phi1(x, lambda, scale, penalty); }, t.s1, delta);
  if (!t.s2.empty())
    out.s2 = tntf::prox_conjugate([&](std::span<const double> x) { return prox_phi2(x, theta, scale); }, t.s2, delta);
  return out;
}

double RestorationProblem::penalty_value(const Coefficients& au) const {
  double value = 0.0;
  if (!au.s1.empty()) value += phi1_value(au.s1, lambda, penalty);
  if (!au.s2.empty()) value += phi2_value(au.s2, theta);
  return value;
}

double objective(const RestorationProblem& problem, const Image& u) {
  const Image ku = problem.K.apply(u);
  double fidelity = 0.0;
  for (std::size_t i = 0; i < ku.size(); ++i) {
    const double r = ku.pixels()[i] - problem.z.pixels()[i];
    fidelity += r * r;
  }
  return 0.5 * fidelity + problem.penalty_value(problem.A.apply(u));
}

SolverState initial_state(const RestorationProblem& problem) {
  const std::size_t n = problem.pixels();
  SolverState state;
  state.u = Image(problem.width(), problem.height(), 0.0);
  state.v.assign(n, 0.0);
  state.s = problem.A.zeros(n);
  state.at_s.assign(n, 0.0);
  return state;
}

double m_norm(std::span<const double> dv, const Coefficients& ds, const AnalysisOperator& A, std::size_t width,
              std::size_t height, double gamma, double delta) {
  if (!(gamma * delta < 1.0)) throw std::invalid_argument("m_norm: gamma * delta must be < 1");
  std::vector<double> at_ds(width * height);
  A.adjoint_into(ds, width, height, at_ds);
  return m_norm_from_parts(squared_norm(dv), squared_norm(ds), squared_norm(at_ds), gamma, delta);
}

void pd3o_step(SolverState& state, const RestorationProblem& problem, double gamma, double delta) {
  const std::size_t w = problem.width();
  const std::size_t h = problem.height();
  const std::size_t n = problem.pixels();
  const auto z = problem.z.pixels();

  if (state.at_s.size() != n) {
    state.at_s.assign(n, 0.0);
    problem.A.adjoint_into(state.s, w, h, state.at_s);
  }

  Image u(w, h, 0.0);
  std::copy(state.v.begin(), state.v.end(), u.pixels().begin());
  project_box_inplace(u.pixels());

  // gradient of the fidelity term and its value
  std::vector<double> residual(n), grad(n);
  problem.K.apply_into(u.pixels(), w, h, false, residual);
  double fidelity = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    residual[i] -= z[i];
    fidelity += residual[i] * residual[i];
  }
  problem.K.apply_into(residual, w, h, true, grad);

  Coefficients au;
  problem.A.apply_into(u.pixels(), w, h, au);
  const double objective_value = 0.5 * fidelity + problem.penalty_value(au);

  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = gamma * state.at_s[i] - (2.0 * u.pixels()[i] - state.v[i]) + gamma * grad[i];

  Coefficients t;
  problem.A.apply_into(x, w, h, t);
  for (std::size_t i = 0; i < t.s1.size(); ++i) t.s1[i] = state.s.s1[i] - delta * t.s1[i];
  for (std::size_t i = 0; i < t.s2.size(); ++i) t.s2[i] = state.s.s2[i] - delta * t.s2[i];
  Coefficients s_next = problem.prox_conjugate(t, delta);
  check_finite(s_next.s1, state.k, "dual iterate");
  check_finite(s_next.s2, state.k, "dual iterate");

  std::vector<double> at_s_next(n);
  problem.A.adjoint_into(s_next, w, h, at_s_next);

  std::vector<double> v_next(n);
  for (std::size_t i = 0; i < n; ++i) v_next[i] = u.pixels()[i] - gamma * grad[i] - gamma * at_s_next[i];
  check_finite(v_next, state.k, "primal iterate");

  // Step length in the M metric; A^T ds follows from linearity.
  double dv_sq = 0.0, at_ds_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dv = v_next[i] - state.v[i];
    const double ad = at_s_next[i] - state.at_s[i];
    dv_sq += dv * dv;
    at_ds_sq += ad * ad;
  }
  double ds_sq = 0.0;
  for (std::size_t i = 0; i < s_next.s1.size(); ++i) ds_sq += (s_next.s1[i] - state.s.s1[i]) * (s_next.s1[i] - state.s.s1[i]);
  for (std::size_t i = 0; i < s_next.s2.size(); ++i) ds_sq += (s_next.s2[i] - state.s.s2[i]) * (s_next.s2[i] - state.s.s2[i]);

  Image u_next(w, h, 0.0);
  std::copy(v_next.begin(), v_next.end(), u_next.pixels().begin());
  project_box_inplace(u_next.pixels());
  double du_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = u_next.pixels()[i] - u.pixels()[i];
    du_sq += d * d;
  }

  state.history.push_back(IterationRecord{
      state.k, objective_value, m_norm_from_parts(dv_sq, ds_sq, at_ds_sq, gamma, delta),
      std::sqrt(du_sq) / std::max(norm2(u.pixels()), kRelChangeFloor)});
  state.u = std::move(u_next);
  state.v = std::move(v_next);
  state.s = std::move(s_next);
  state.at_s = std::move(at_s_next);
  ++state.k;
}

SolverState pd3o_step(const SolverState& state, const RestorationProblem& problem, const SolverConfig& cfg) {
  validate(cfg);
  SolverState next = state;
  pd3o_step(next, problem, cfg.gamma, cfg.delta);
  return next;
}

void refresh_weights(RestorationProblem& problem, const SolverConfig& cfg, const Image& source) {
  const std::size_t w = problem.width();
  const std::size_t h = problem.height();
  const Coefficients coeffs = problem.A.apply(source);
  if (problem.A.has_s1()) {
    if (adaptive_lambda(cfg.mode) && cfg.base_lambda > 0.0)
      problem.lambda = estimate_lambda(coeffs.s1, w, h, cfg.base_lambda, cfg.param_window);
    else
      problem.lambda = GroupWeightMap::uniform(problem.pixels(), adaptive_lambda(cfg.mode) ? 0.0 : cfg.base_lambda);
  }
  if (problem.A.has_s2()) {
    const double prefilter = problem.A.mode() == AnalysisMode::tntf ? kDhfLowpassEnergy : 1.0;
    const auto noise = NoiseModel::for_bank(cfg.sigma, problem.A.dct(), prefilter);
    problem.theta = estimate_theta(coeffs.s2, w, h, noise, cfg.param_window);
  }
}

RestorationProblem make_problem(const Image& z, const SolverConfig& cfg, const BlurOperator& blur) {
  validate(cfg);
  if (z.empty()) throw std::invalid_argument("restore: empty observation");
  if (!all_finite(z.pixels())) throw std::invalid_argument("restore: observation contains non-finite values");
  if (cfg.param_window > std::min(z.width(), z.height()))
    throw std::invalid_argument("restore: parameter window larger than the image");
  RestorationProblem problem(z, blur, AnalysisOperator(analysis_mode_for(cfg.mode), cfg.dct_dilation),
                             penalty_for(cfg.mode));
  refresh_weights(problem, cfg, z);
  return problem;
}

RestoreResult restore(const Image& z, const SolverConfig& cfg, const BlurOperator& blur,
                      const IterationMonitor& monitor) {
  // the step bound against ||K|| is checked before the rest of validate() so
  // an oversized gamma is reported as such rather than through gamma * delta
  if (!(cfg.gamma > 0.0) || !std::isfinite(cfg.gamma)) throw std::invalid_argument("gamma must be positive");
  if (z.width() < blur.kernel().extent() || z.height() < blur.kernel().extent())
    throw std::invalid_argument("restore: image smaller than the blur kernel");

  RestoreResult result;
  result.blur_norm = operator_norm(blur, z.width(), z.height(), kNormIterations, cfg.seed);
  const double lipschitz = result.blur_norm * result.blur_norm;
  if (!(cfg.gamma * lipschitz < 2.0))
    throw std::invalid_argument("gamma must satisfy gamma < 2/||K||^2 (||K||^2 ~ " + std::to_string(lipschitz) + ")");
  validate(cfg);

  RestorationProblem problem = make_problem(z, cfg, blur);

  // ||A|| = 1 for every mode except dhf+dct, whose stacked blocks overlap in
  // frequency. Rescale delta there so that gamma * delta * ||A||^2 stays below 1.
  double delta = cfg.delta;
  if (problem.A.mode() == AnalysisMode::dhf_dct) {
    const double a_norm = operator_norm(problem.A, z.width(), z.height(), kNormIterations, cfg.seed);
    if (a_norm * a_norm > 1.0) delta = cfg.delta / (a_norm * a_norm);
  }
  result.delta_used = delta;

  SolverState state = initial_state(problem);
  const bool adaptive = adaptive_lambda(cfg.mode) || uses_theta(cfg.mode);
  for (std::size_t k = 0; k < cfg.max_iters; ++k) {
    if (adaptive && !cfg.freeze_params && k > 0 && update_schedule(k)) refresh_weights(problem, cfg, state.u);
    pd3o_step(state, problem, cfg.gamma, delta);
    const auto& record = state.history.back();
    if (monitor) monitor(record);
    if (record.rel_change < cfg.rel_tol) {
      result.converged = true;
      break;
    }
  }

  result.iterations = state.k;
  result.final_objective = objective(problem, state.u);
  result.image = std::move(state.u);
  result.history = std::move(state.history);
  result.lambda = std::move(problem.lambda);
  result.theta = std::move(problem.theta);
  return result;
}

void write_history_csv(std::ostream& out, const std::vector<IterationRecord>& history) {
  out << "k,objective,rel_change,m_norm_step\n";
  out << std::setprecision(17);
  for (const auto& r : history) out << r.k << ',' << r.objective << ',' << r.rel_change << ',' << r.m_norm_step << '\n';
}

}  // namespace tntf
