#include "tntf/framelet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "tntf/image_io.hpp"

namespace tntf {
namespace {

Filter make_filter(std::size_t rows, std::size_t cols, std::vector<double> taps, int anchor_row, int anchor_col) {
  return Filter{rows, cols, std::move(taps), anchor_row, anchor_col};
}

Filter dhf_filter(std::array<double, 4> entries) {
  std::vector<double> taps(entries.begin(), entries.end());
  for (double& t : taps) t *= 0.25;
  return make_filter(2, 2, std::move(taps), 0, 0);
}

void check_bank_dilation(std::size_t dilation) {
  if (dilation == 0) throw std::invalid_argument("filter bank dilation must be positive");
}

}  // namespace

double Filter::sum() const {
  double s = 0.0;
  for (double t : taps) s += t;
  return s;
}

double Filter::frobenius_norm() const {
  double s = 0.0;
  for (double t : taps) s += t * t;
  return std::sqrt(s);
}

std::complex<double> Filter::symbol(double xi_row, double xi_col) const {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double kr = static_cast<double>(static_cast<int>(r) - anchor_row);
      const double kc = static_cast<double>(static_cast<int>(c) - anchor_col);
      acc += tap(r, c) * std::polar(1.0, -(kr * xi_row + kc * xi_col));
    }
  }
  return acc;
}

FilterBank dhf_bank(std::size_t dilation) {
  check_bank_dilation(dilation);
  FilterBank bank;
  bank.name = "dhf";
  bank.dilation = dilation;
  bank.lowpass = dhf_filter({1, 1, 1, 1});
  bank.highpass = {
      dhf_filter({1, 0, 0, -1}),   // 45 degrees
      dhf_filter({0, -1, 1, 0}),   // 135 degrees
      dhf_filter({1, -1, 0, 0}),   // horizontal
      dhf_filter({1, 0, -1, 0}),   // vertical
      dhf_filter({0, 0, 1, -1}),   // horizontal
      dhf_filter({0, 1, 0, -1}),   // vertical
  };
  return bank;
}

FilterBank dct_bank(std::size_t dilation) {
  check_bank_dilation(dilation);
  const double s3 = std::sqrt(3.0), s2 = std::sqrt(2.0), s6 = std::sqrt(6.0);
  const std::array<std::array<double, 3>, 3> c{{
      {1.0 / s3, 1.0 / s3, 1.0 / s3},
      {1.0 / s2, 0.0, -1.0 / s2},
      {1.0 / s6, -2.0 / s6, 1.0 / s6},
  }};
  FilterBank bank;
  bank.name = "dct";
  bank.dilation = dilation;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      std::vector<double> taps(9);
      for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t col = 0; col < 3; ++col) taps[r * 3 + col] = c[i][r] * c[j][col] / 3.0;
      auto f = make_filter(3, 3, std::move(taps), 1, 1);
      if (i == 0 && j == 0)
        bank.lowpass = std::move(f);
      else
        bank.highpass.push_back(std::move(f));
    }
  }
  return bank;
}

std::vector<FilterBank> two_level_banks(std::size_t dct_dilation) {
  return {dhf_bank(1), dct_bank(dct_dilation)};
}

void check_filter_fits(const Filter& f, std::size_t dilation, std::size_t width, std::size_t height) {
  if (dilation == 0) throw std::invalid_argument("dilation must be positive");
  const std::size_t support = dilation * (f.extent() - 1) + 1;
  if (support > std::min(width, height))
    throw std::invalid_argument("filter larger than image (dilated support " + std::to_string(support) + ")");
}

void convolve_periodic_accumulate(std::span<const double> in, std::size_t width, std::size_t height,
                                  const Filter& f, std::size_t dilation, bool adjoint, std::span<double> out,
                                  double scale) {
  const long w = static_cast<long>(width);
  const long h = static_cast<long>(height);
  const long sign = adjoint ? -1 : 1;
  const long d = static_cast<long>(dilation);
  for (std::size_t tr = 0; tr < f.rows; ++tr) {
    for (std::size_t tc = 0; tc < f.cols; ++tc) {
      const double weight = scale * f.tap(tr, tc);
      if (weight == 0.0) continue;
      const long dr = sign * d * (static_cast<long>(tr) - f.anchor_row);
      const long dc = sign * d * (static_cast<long>(tc) - f.anchor_col);
      const std::size_t col_shift = static_cast<std::size_t>(((dc % w) + w) % w);
      const std::size_t head = width - col_shift;
      for (long r = 0; r < h; ++r) {
        const long sr = (((r + dr) % h) + h) % h;
        const double* src = in.data() + sr * w;
        double* dst = out.data() + r * w;
        for (std::size_t c = 0; c < head; ++c) dst[c] += weight * src[c + col_shift];
        for (std::size_t c = head; c < width; ++c) dst[c] += weight * src[c - head];
      }
    }
  }
}

Image convolve_periodic(const Image& img, const Filter& f, std::size_t dilation, bool adjoint) {
  check_filter_fits(f, dilation, img.width(), img.height());
  Image out(img.width(), img.height(), 0.0);
  convolve_periodic_accumulate(img.pixels(), img.width(), img.height(), f, dilation, adjoint, out.pixels());
  return out;
}

CoefficientPyramid udfmt_decompose(const Image& img, std::span<const FilterBank> banks) {
  CoefficientPyramid pyr;
  pyr.width = img.width();
  pyr.height = img.height();
  Image v = img;
  for (const auto& bank : banks) {
    CoefficientPyramid::Level level;
    level.highpass.reserve(bank.highpass.size());
    for (const auto& f : bank.highpass) level.highpass.push_back(convolve_periodic(v, f, bank.dilation, false));
    v = convolve_periodic(v, bank.lowpass, bank.dilation, false);
    pyr.levels.push_back(std::move(level));
  }
  pyr.coarse = std::move(v);
  return pyr;
}

Image udfmt_reconstruct(const CoefficientPyramid& pyr, std::span<const FilterBank> banks) {
  if (pyr.levels.size() != banks.size()) throw std::invalid_argument("udfmt_reconstruct: level/bank count mismatch");
  if (pyr.coarse.width() != pyr.width || pyr.coarse.height() != pyr.height)
    throw std::invalid_argument("udfmt_reconstruct: coarse plane has wrong shape");
  Image v = pyr.coarse;
  for (std::size_t j = banks.size(); j-- > 0;) {
    const auto& bank = banks[j];
    const auto& level = pyr.levels[j];
    if (level.highpass.size() != bank.highpass.size())
      throw std::invalid_argument("udfmt_reconstruct: plane count does not match bank " + bank.name);
    check_filter_fits(bank.lowpass, bank.dilation, pyr.width, pyr.height);
    Image next(pyr.width, pyr.height, 0.0);
    convolve_periodic_accumulate(v.pixels(), pyr.width, pyr.height, bank.lowpass, bank.dilation, true, next.pixels());
    for (std::size_t l = 0; l < bank.highpass.size(); ++l) {
      if (!level.highpass[l].same_shape(next)) throw std::invalid_argument("udfmt_reconstruct: plane shape mismatch");
      check_filter_fits(bank.highpass[l], bank.dilation, pyr.width, pyr.height);
      convolve_periodic_accumulate(level.highpass[l].pixels(), pyr.width, pyr.height, bank.highpass[l], bank.dilation,
                                   true, next.pixels());
    }
    v = std::move(next);
  }
  return v;
}

TffbReport verify_tffb(const FilterBank& bank, std::size_t grid) {
  if (grid < 8) throw std::invalid_argument("verify_tffb: grid must be at least 8");
  std::vector<const Filter*> filters{&bank.lowpass};
  for (const auto& f : bank.highpass) filters.push_back(&f);

  TffbReport report;
  const double step = 2.0 * std::numbers::pi / static_cast<double>(grid);
  for (std::size_t a = 0; a < grid; ++a) {
    for (std::size_t b = 0; b < grid; ++b) {
      const double x1 = step * static_cast<double>(a);
      const double x2 = step * static_cast<double>(b);
      for (int w1 = 0; w1 < 2; ++w1) {
        for (int w2 = 0; w2 < 2; ++w2) {
          std::complex<double> acc{0.0, 0.0};
          for (const Filter* f : filters)
            acc += f->symbol(x1, x2) * std::conj(f->symbol(x1 + std::numbers::pi * w1, x2 + std::numbers::pi * w2));
          const double target = (w1 == 0 && w2 == 0) ? 1.0 : 0.0;
          const double residual = std::abs(acc - target);
          report.max_tffb_residual = std::max(report.max_tffb_residual, residual);
          if (w1 == 0 && w2 == 0) report.max_pou_residual = std::max(report.max_pou_residual, residual);
        }
      }
    }
  }
  return report;
}

void dump_pyramid(const CoefficientPyramid& pyr, std::span<const FilterBank> banks,
                  const std::filesystem::path& directory) {
  if (pyr.levels.size() != banks.size()) throw std::invalid_argument("dump_pyramid: level/bank count mismatch");
  std::filesystem::create_directories(directory);
  nlohmann::json index = nlohmann::json::array();

  auto emit = [&](const Image& plane, const std::string& file, std::size_t level, const std::string& filter,
                  std::size_t dilation) {
    const auto [lo, hi] = std::minmax_element(plane.pixels().begin(), plane.pixels().end());
    const double range = *hi - *lo;
    Image scaled = plane;
    for (double& p : scaled.pixels()) p = range > 0.0 ? (p - *lo) / range : 0.0;
    write_image(scaled, directory / file, ImageFormat::pgm_binary);
    index.push_back({{"file", file}, {"level", level}, {"filter", filter}, {"dilation", dilation},
                     {"min", *lo}, {"max", *hi}});
  };

  for (std::size_t j = 0; j < pyr.levels.size(); ++j) {
    for (std::size_t l = 0; l < pyr.levels[j].highpass.size(); ++l) {
      const std::string tag = banks[j].name + "_tau" + std::to_string(l + 1);
      emit(pyr.levels[j].highpass[l], "level" + std::to_string(j) + "_" + tag + ".pgm", j, tag, banks[j].dilation);
    }
  }
  emit(pyr.coarse, "coarse.pgm", pyr.levels.size(), "lowpass", banks.empty() ? 1 : banks.back().dilation);

  std::ofstream out(directory / "index.json");
  out << index.dump(2) << '\n';
}

}  // namespace tntf
