#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tntf/image.hpp"
#include "tntf/linops.hpp"
#include "tntf/prox.hpp"

namespace tntf {

/// Regularizer selection:
///   tntf      Phi1(B1h u) + Phi2(B2h B1l u)   adaptive Lambda and Theta
///   dhf_dct   Phi1(B1h u) + Phi2(B2h u)       adaptive Lambda and Theta
///   dct_only  Phi2(B2h u)                     adaptive Theta
///   tv_aniso  lambda * sum |x3| + |x4|        constant lambda
///   tv_iso    lambda * sum ||(x3,x4)||        constant lambda
enum class RegularizerMode { tntf, tv_aniso, tv_iso, dct_only, dhf_dct };

std::string_view to_string(RegularizerMode mode) noexcept;
/// Accepts tntf, tv-aniso, tv-iso, dct (or dct-only), dhf+dct.
RegularizerMode parse_regularizer_mode(std::string_view name);

AnalysisMode analysis_mode_for(RegularizerMode mode) noexcept;
GroupPenalty penalty_for(RegularizerMode mode) noexcept;
bool uses_lambda(RegularizerMode mode) noexcept;
bool uses_theta(RegularizerMode mode) noexcept;
bool adaptive_lambda(RegularizerMode mode) noexcept;

struct SolverConfig {
  double gamma = 1.99;
  double delta = 0.5;
  std::size_t max_iters = 400;
  double rel_tol = 1e-9;
  double base_lambda = 2e-4;
  double sigma = 0.0;
  RegularizerMode mode = RegularizerMode::tntf;
  std::size_t param_window = 3;
  std::uint64_t seed = 0;
  /// Estimate Lambda/Theta once from the observation and never update them.
  bool freeze_params = false;
  std::size_t dct_dilation = 2;
};

/// Throws std::invalid_argument on an inconsistent configuration.
void validate(const SolverConfig& cfg);

struct IterationRecord {
  std::size_t k = 0;
  double objective = 0.0;    // objective at u^k
  double m_norm_step = 0.0;  // ||(v^{k+1}, s^{k+1}) - (v^k, s^k)||_M
  double rel_change = 0.0;   // ||u^{k+1} - u^k|| / ||u^k||
};

struct RestorationProblem {
  RestorationProblem(Image observation, BlurOperator blur, AnalysisOperator analysis, GroupPenalty penalty);

  Image z;
  BlurOperator K;
  AnalysisOperator A;
  GroupPenalty penalty;
  GroupWeightMap lambda;  // used when A has an s1 block
  SubbandWeightMap theta;  // used when A has an s2 block

  std::size_t width() const noexcept { return z.width(); }
  std::size_t height() const noexcept { return z.height(); }
  std::size_t pixels() const noexcept { return z.size(); }

  /// prox of Phi/delta on each block, then the Moreau identity.
  Coefficients prox_conjugate(const Coefficients& t, double delta) const;
  double penalty_value(const Coefficients& au) const;
};

/// 1/2 ||K u - z||^2 + p(A u).
double objective(const RestorationProblem& problem, const Image& u);

struct SolverState {
  Image u;                // Proj_[0,1](v)
  std::vector<double> v;  // primal auxiliary variable
  Coefficients s;         // dual variable (s1, s2)
  std::size_t k = 0;
  std::vector<IterationRecord> history;
  std::vector<double> at_s;  // cached A^T s; recomputed when empty
};

/// v = 0, s = 0.
SolverState initial_state(const RestorationProblem& problem);

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::size_t iteration, const std::string& what)
      : std::runtime_error(what), iteration_(iteration) {}
  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

/// One PD3O iteration in place:
///   u = Proj(v)
///   x = gamma A^T s - (2u - v) + gamma K^T(Ku - z)
///   s+ = prox_{delta p*}(s - delta A x)
///   v+ = u - gamma K^T(Ku - z) - gamma A^T s+
/// Appends the history record for this iteration.
void pd3o_step(SolverState& state, const RestorationProblem& problem, double gamma, double delta);

SolverState pd3o_step(const SolverState& state, const RestorationProblem& problem, const SolverConfig& cfg);

/// sqrt(||dv||^2 + (gamma/delta)(||ds||^2 - gamma delta ||A^T ds||^2)).
double m_norm(std::span<const double> dv, const Coefficients& ds, const AnalysisOperator& A, std::size_t width,
              std::size_t height, double gamma, double delta);

struct RestoreResult {
  Image image;
  std::vector<IterationRecord> history;
  std::size_t iterations = 0;
  bool converged = false;
  double final_objective = 0.0;
  double delta_used = 0.0;  // delta after rescaling for ||A|| > 1
  double blur_norm = 0.0;   // power-iteration estimate of ||K||
  GroupWeightMap lambda;
  SubbandWeightMap theta;
};

using IterationMonitor = std::function<void(const IterationRecord&)>;

/// Runs PD3O until rel_change < rel_tol or max_iters iterations, refreshing
/// the adaptive weights on the update schedule unless freeze_params is set.
RestoreResult restore(const Image& z, const SolverConfig& cfg, const BlurOperator& blur = BlurOperator::average(),
                      const IterationMonitor& monitor = {});

/// Builds the problem restore() would solve, with weights estimated from z.
RestorationProblem make_problem(const Image& z, const SolverConfig& cfg,
                                const BlurOperator& blur = BlurOperator::average());

/// Re-estimates the adaptive weights of `problem` from the image `source`.
void refresh_weights(RestorationProblem& problem, const SolverConfig& cfg, const Image& source);

/// CSV with header "k,objective,rel_change,m_norm_step".
void write_history_csv(std::ostream& out, const std::vector<IterationRecord>& history);

}  // namespace tntf
