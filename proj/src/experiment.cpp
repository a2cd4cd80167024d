#include "tntf/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "tntf/sim.hpp"

namespace tntf {

std::vector<double> default_lambda_grid(RegularizerMode mode) {
  switch (mode) {
    case RegularizerMode::tntf: return {1e-4, 2e-4, 3.5e-4, 5e-4};
    case RegularizerMode::dhf_dct: return {5e-5, 1e-4, 2e-4, 3.5e-4};
    case RegularizerMode::tv_aniso:
    case RegularizerMode::tv_iso: return {0.004, 0.006, 0.008, 0.01, 0.012, 0.015, 0.02, 0.025};
    case RegularizerMode::dct_only: return {0.0};
  }
  return {};
}

CompareResult compare_modes(const Image& truth, const CompareSetup& setup) {
  if (setup.modes.empty()) throw std::invalid_argument("compare: no modes given");
  CompareResult result;
  result.observed = degrade(truth, DegradationSpec{BlurKernel::average5, setup.sigma, setup.seed});
  result.observed_quality = evaluate(truth, result.observed);

  for (const auto mode : setup.modes) {
    std::vector<double> grid;
    if (!uses_lambda(mode)) {
      grid = {0.0};
    } else if (!setup.lambda_grid.empty()) {
      grid = setup.lambda_grid;
    } else if (auto it = setup.per_mode_grid.find(mode); it != setup.per_mode_grid.end()) {
      grid = it->second;
    } else {
      grid = default_lambda_grid(mode);
    }
    if (grid.empty()) throw std::invalid_argument("compare: empty lambda grid");

    CompareRow best;
    bool have_best = false;
    for (const double lambda : grid) {
      SolverConfig cfg = setup.solver;
      cfg.mode = mode;
      cfg.base_lambda = lambda;
      cfg.sigma = setup.sigma;
      cfg.seed = setup.seed;
      const auto start = std::chrono::steady_clock::now();
      auto run = restore(result.observed, cfg, make_blur(BlurKernel::average5));
      const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      const QualityReport quality = evaluate(truth, run.image);
      if (!have_best || quality.psnr_db > best.quality.psnr_db) {
        best = CompareRow{mode, lambda, quality, run.iterations, seconds, std::move(run.image)};
        have_best = true;
      }
    }
    result.rows.push_back(std::move(best));
  }
  return result;
}

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows) {
  out << "mode,lambda,psnr_db,ssim,iterations,seconds\n";
  for (const auto& r : rows) {
    out << to_string(r.mode) << ',' << std::setprecision(6) << r.lambda << ',' << std::fixed << std::setprecision(4)
        << r.quality.psnr_db << ',' << std::setprecision(6) << r.quality.ssim << ',' << r.iterations << ','
        << std::setprecision(3) << r.seconds << '\n';
    out.unsetf(std::ios::floatfield);
  }
}

std::string format_compare_table(const std::vector<CompareRow>& rows) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %10s %10s %7s %6s %8s\n", "mode", "lambda", "PSNR(dB)", "SSIM", "iters",
                "seconds");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-10s %10.3g %10.2f %7.3f %6zu %8.2f\n", std::string(to_string(r.mode)).c_str(),
                  r.lambda, r.quality.psnr_db, r.quality.ssim, r.iterations, r.seconds);
    out << line;
  }
  return out.str();
}

std::vector<std::string> split_list(std::string_view csv) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const auto comma = csv.find(',', start);
    const auto end = comma == std::string_view::npos ? csv.size() : comma;
    std::string token(csv.substr(start, end - start));
    const auto first = token.find_first_not_of(" \t");
    const auto last = token.find_last_not_of(" \t");
    if (first != std::string::npos) out.push_back(token.substr(first, last - first + 1));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<double> parse_real_list(std::string_view csv) {
  std::vector<double> out;
  for (const auto& token : split_list(csv)) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a number: " + token);
    }
    if (used != token.size()) throw std::invalid_argument("not a number: " + token);
    out.push_back(value);
  }
  return out;
}

}  // namespace tntf
