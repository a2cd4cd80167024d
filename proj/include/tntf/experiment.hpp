#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tntf/image.hpp"
#include "tntf/metrics.hpp"
#include "tntf/solver.hpp"

namespace tntf {

struct CompareRow {
  RegularizerMode mode = RegularizerMode::tntf;
  double lambda = 0.0;
  QualityReport quality;
  std::size_t iterations = 0;
  double seconds = 0.0;
  Image restored;
};

struct CompareSetup {
  double sigma = 0.02;
  std::uint64_t seed = 0;
  std::vector<RegularizerMode> modes;
  /// Grid shared by every mode; when empty, per_mode_grid or the built-in
  /// default grid for the mode is used.
  std::vector<double> lambda_grid;
  std::map<RegularizerMode, std::vector<double>> per_mode_grid;
  /// Base solver settings; mode, base_lambda and sigma are filled per run.
  SolverConfig solver;
};

struct CompareResult {
  Image observed;
  QualityReport observed_quality;
  std::vector<CompareRow> rows;
};

/// Built-in lambda search grid per mode (the two families live on very
/// different scales: adaptive weights multiply lambda by ~1/||w||).
std::vector<double> default_lambda_grid(RegularizerMode mode);

/// Degrades `truth` once, then restores under each mode, keeping the lambda
/// with the highest PSNR. dct mode has no lambda and runs once.
CompareResult compare_modes(const Image& truth, const CompareSetup& setup);

/// Header: mode,lambda,psnr_db,ssim,iterations,seconds
void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows);
std::string format_compare_table(const std::vector<CompareRow>& rows);

/// Parses "a,b,c" into doubles; throws std::invalid_argument on bad tokens.
std::vector<double> parse_real_list(std::string_view csv);
std::vector<std::string> split_list(std::string_view csv);

}  // namespace tntf
