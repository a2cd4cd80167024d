#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tntf/experiment.hpp"
#include "tntf/framelet.hpp"
#include "tntf/image_io.hpp"
#include "tntf/metrics.hpp"
#include "tntf/sim.hpp"
#include "tntf/solver.hpp"
#include "tntf/synthetic.hpp"

namespace {

using namespace tntf;
using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

// Thrown for flag combinations CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void save(const Image& img, const fs::path& path) { write_image(img, path, format_for_path(path)); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

json quality_json(const QualityReport& q) {
  // inf PSNR has no JSON number; keep it as a string
  json j;
  j["psnr_db"] = std::isfinite(q.psnr_db) ? json(q.psnr_db) : json("inf");
  j["ssim"] = q.ssim;
  return j;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct DegradeArgs {
  std::string in, out, kernel = "average5";
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

int run_degrade(const DegradeArgs& a) {
  const Image u = read_image(a.in);
  const DegradationSpec spec{parse_blur_kernel(a.kernel), a.sigma, a.seed};
  const Image z = degrade(u, spec);
  save(z, a.out);
  std::ostringstream side;
  side.precision(17);
  side << "kernel: " << to_string(spec.kernel) << "\nsigma: " << spec.sigma << "\nseed: " << spec.seed
       << "\nsource: " << a.in << '\n';
  write_text(fs::path(a.out + ".txt"), side.str());
  return kOk;
}

struct RestoreArgs {
  std::string in, out, mode = "tntf", history, truth;
  double lambda = 2e-4, gamma = 1.99, delta = 0.5, tol = 1e-9;
  std::optional<double> sigma;
  std::size_t max_iters = 400;
  bool freeze = false, verbose = false;
};

int run_restore(const RestoreArgs& a) {
  SolverConfig cfg;
  cfg.mode = parse_regularizer_mode(a.mode);
  cfg.base_lambda = a.lambda;
  cfg.gamma = a.gamma;
  cfg.delta = a.delta;
  cfg.max_iters = a.max_iters;
  cfg.rel_tol = a.tol;
  cfg.freeze_params = a.freeze;
  if (uses_theta(cfg.mode) && !a.sigma) throw UsageError("--sigma is required for mode " + a.mode);
  cfg.sigma = a.sigma.value_or(0.0);

  const Image z = read_image(a.in);
  std::optional<Image> truth;
  if (!a.truth.empty()) {
    truth = read_image(a.truth);
    if (truth->width() != z.width() || truth->height() != z.height())
      throw UsageError("--truth size does not match --in");
  }

  IterationMonitor monitor;
  if (a.verbose)
    monitor = [](const IterationRecord& r) {
      if (r.k % 30 == 0)
        std::fprintf(stderr, "iter %4zu  objective %.10e  rel_change %.3e\n", r.k, r.objective, r.rel_change);
    };

  const auto t0 = std::chrono::steady_clock::now();
  const RestoreResult res = restore(z, cfg, BlurOperator::average(), monitor);
  const double seconds = seconds_since(t0);

  save(res.image, a.out);
  if (!a.history.empty()) {
    std::ofstream hist(a.history);
    if (!hist) throw std::runtime_error("cannot write " + a.history);
    write_history_csv(hist, res.history);
  }

  json m;
  m["command"] = "restore";
  m["input"] = a.in;
  m["output"] = a.out;
  m["parameters"] = {{"mode", std::string(to_string(cfg.mode))},
                     {"lambda", cfg.base_lambda},
                     {"sigma", cfg.sigma},
                     {"gamma", cfg.gamma},
                     {"delta", cfg.delta},
                     {"delta_used", res.delta_used},
                     {"max_iters", cfg.max_iters},
                     {"tol", cfg.rel_tol},
                     {"freeze_params", cfg.freeze_params},
                     {"kernel", "average5"},
                     {"param_window", cfg.param_window}};
  m["iterations"] = res.iterations;
  m["converged"] = res.converged;
  m["final_objective"] = res.final_objective;
  m["wall_time_seconds"] = seconds;
  if (!a.history.empty()) m["history"] = a.history;
  if (truth) {
    m["truth"] = a.truth;
    m["metrics"] = quality_json(evaluate(*truth, res.image));
  }
  write_text(fs::path(a.out + ".json"), m.dump(2) + "\n");
  return kOk;
}

int run_metrics(const std::string& ref_path, const std::string& test_path) {
  const Image ref = read_image(ref_path), test = read_image(test_path);
  if (ref.width() != test.width() || ref.height() != test.height())
    throw UsageError("image sizes differ: " + std::to_string(ref.width()) + "x" + std::to_string(ref.height()) +
                     " vs " + std::to_string(test.width()) + "x" + std::to_string(test.height()));
  std::cout << format_quality(evaluate(ref, test)) << '\n';
  return kOk;
}

int run_verify_frames(const std::string& bank_name, std::size_t grid) {
  // The DCT bank is used undecimated, where only the partition of unity is
  // required; its shifted (omega != 0) terms are reported for information.
  const bool dhf = bank_name == "dhf";
  const FilterBank bank = dhf ? dhf_bank(1) : dct_bank(1);
  const TffbReport rep = verify_tffb(bank, grid);
  constexpr double kTol = 1e-10;
  std::printf("bank: %s\ngrid: %zu\npartition-of-unity residual: %.3e\nfull tffb residual: %.3e%s\n",
              bank_name.c_str(), grid, rep.max_pou_residual, rep.max_tffb_residual, dhf ? "" : " (not required)");
  const bool ok = rep.max_pou_residual <= kTol && (!dhf || rep.max_tffb_residual <= kTol);
  std::printf("%s\n", ok ? "OK" : "FAILED");
  return ok ? kOk : kFailed;
}

struct CompareArgs {
  std::string truth, modes, lambda_grid, csv;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::size_t max_iters = 400;
};

int run_compare(const CompareArgs& a) {
  CompareSetup setup;
  setup.sigma = a.sigma;
  setup.seed = a.seed;
  for (const auto& name : split_list(a.modes)) setup.modes.push_back(parse_regularizer_mode(name));
  if (setup.modes.empty()) throw UsageError("--modes must name at least one mode");
  if (!a.lambda_grid.empty()) setup.lambda_grid = parse_real_list(a.lambda_grid);
  setup.solver.max_iters = a.max_iters;

  const Image truth = read_image(a.truth);
  const CompareResult res = compare_modes(truth, setup);
  std::cout << "observed: " << format_quality(res.observed_quality) << '\n' << format_compare_table(res.rows);
  if (!a.csv.empty()) {
    std::ofstream out(a.csv);
    if (!out) throw std::runtime_error("cannot write " + a.csv);
    write_compare_csv(out, res.rows);
  } else {
    std::cout << '\n';
    write_compare_csv(std::cout, res.rows);
  }
  return kOk;
}

int run_synth(const std::string& kind, std::size_t size, std::uint64_t seed, const std::string& out) {
  save(make_synthetic(parse_synthetic_kind(kind), size, seed), out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Image deblurring with two-level non-stationary tight framelets"};
  app.require_subcommand(1);
  int status = kOk;

  DegradeArgs dg;
  auto* degrade_cmd = app.add_subcommand("degrade", "Blur and add Gaussian noise to an image");
  degrade_cmd->add_option("--in", dg.in, "Clean input image")->required();
  degrade_cmd->add_option("--out", dg.out, "Degraded output image")->required();
  degrade_cmd->add_option("--sigma", dg.sigma, "Noise standard deviation on [0,1] intensities")->required();
  degrade_cmd->add_option("--seed", dg.seed, "Noise seed")->capture_default_str();
  degrade_cmd->add_option("--kernel", dg.kernel, "Blur kernel")->check(CLI::IsMember({"average5"}))->capture_default_str();
  degrade_cmd->callback([&] { status = run_degrade(dg); });

  RestoreArgs rs;
  double sigma_in = 0.0;
  auto* restore_cmd = app.add_subcommand("restore", "Restore a blurred, noisy image");
  restore_cmd->add_option("--in", rs.in, "Observed image")->required();
  restore_cmd->add_option("--out", rs.out, "Restored image; the manifest goes to <out>.json")->required();
  restore_cmd->add_option("--mode", rs.mode, "Regularizer")
      ->check(CLI::IsMember({"tntf", "tv-aniso", "tv-iso", "dct", "dhf+dct"}))
      ->capture_default_str();
  restore_cmd->add_option("--lambda", rs.lambda, "Base regularization weight")->capture_default_str();
  auto* sigma_opt = restore_cmd->add_option("--sigma", sigma_in, "Noise level (needed by tntf, dct, dhf+dct)");
  restore_cmd->add_option("--gamma", rs.gamma, "Primal step")->capture_default_str();
  restore_cmd->add_option("--delta", rs.delta, "Dual step")->capture_default_str();
  restore_cmd->add_option("--max-iters", rs.max_iters, "Iteration cap")->capture_default_str();
  restore_cmd->add_option("--tol", rs.tol, "Relative change stopping tolerance")->capture_default_str();
  restore_cmd->add_option("--history", rs.history, "Per-iteration CSV");
  restore_cmd->add_flag("--freeze-params", rs.freeze, "Estimate weights once from the observation");
  restore_cmd->add_option("--truth", rs.truth, "Ground truth for metrics in the manifest");
  restore_cmd->add_flag("-v,--verbose", rs.verbose, "Log every 30th iteration to stderr");
  restore_cmd->callback([&] {
    if (sigma_opt->count() > 0) rs.sigma = sigma_in;
    status = run_restore(rs);
  });

  std::string ref_path, test_path;
  auto* metrics_cmd = app.add_subcommand("metrics", "PSNR and SSIM of a test image against a reference");
  metrics_cmd->add_option("--ref", ref_path, "Reference image")->required();
  metrics_cmd->add_option("--test", test_path, "Test image")->required();
  metrics_cmd->callback([&] { status = run_metrics(ref_path, test_path); });

  std::string bank_name;
  std::size_t grid = 64;
  auto* verify_cmd = app.add_subcommand("verify-frames", "Check the frame identities of a filter bank");
  verify_cmd->add_option("--bank", bank_name, "Filter bank")->required()->check(CLI::IsMember({"dhf", "dct"}));
  verify_cmd->add_option("--grid", grid, "Frequency samples per axis")
      ->check(CLI::Range(std::size_t{8}, std::size_t{1} << 14))
      ->capture_default_str();
  verify_cmd->callback([&] { status = run_verify_frames(bank_name, grid); });

  CompareArgs cmp;
  auto* compare_cmd = app.add_subcommand("compare", "Degrade once and compare regularizers");
  compare_cmd->add_option("--truth", cmp.truth, "Ground truth image")->required();
  compare_cmd->add_option("--sigma", cmp.sigma, "Noise standard deviation")->required();
  compare_cmd->add_option("--seed", cmp.seed, "Noise seed")->capture_default_str();
  compare_cmd->add_option("--modes", cmp.modes, "Comma-separated modes")->required();
  compare_cmd->add_option("--lambda-grid", cmp.lambda_grid, "Comma-separated lambdas shared by all modes");
  compare_cmd->add_option("--csv", cmp.csv, "Write the CSV here instead of standard output");
  compare_cmd->add_option("--max-iters", cmp.max_iters, "Iteration cap per run")->capture_default_str();
  compare_cmd->callback([&] { status = run_compare(cmp); });

  std::string kind = "square-circle", synth_out;
  std::size_t size = 128;
  std::uint64_t synth_seed = 0;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic test image");
  synth_cmd->add_option("--kind", kind, "Image kind")->capture_default_str();
  synth_cmd->add_option("--size", size, "Side length")->capture_default_str();
  synth_cmd->add_option("--seed", synth_seed, "Seed")->capture_default_str();
  synth_cmd->add_option("--out", synth_out, "Output image")->required();
  synth_cmd->callback([&] { status = run_synth(kind, size, synth_seed, synth_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ImageIoError& e) {
    // a bad input file is a validation error; a failed write is not
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ImageIoError::Kind::write_failed ? kFailed : kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
  return status;
}
