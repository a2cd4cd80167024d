#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <string>

#include "tntf/framelet.hpp"
#include "tntf/image_io.hpp"
#include "tntf/linops.hpp"
#include "tntf/metrics.hpp"
#include "tntf/sim.hpp"
#include "tntf/solver.hpp"
#include "tntf/synthetic.hpp"

namespace py = pybind11;
using namespace tntf;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Image to_image(const Array& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D array (height, width)");
  const auto h = static_cast<std::size_t>(a.shape(0)), w = static_cast<std::size_t>(a.shape(1));
  return Image(w, h, std::vector<double>(a.data(), a.data() + a.size()));
}

Array to_array(const Image& img) {
  Array out({img.height(), img.width()});
  std::copy(img.pixels().begin(), img.pixels().end(), out.mutable_data());
  return out;
}

Array flat_array(const std::vector<double>& v, std::size_t planes, std::size_t h, std::size_t w) {
  Array out({planes, h, w});
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-level non-stationary tight framelet deblurring (C++ core)";

  py::register_exception<ImageIoError>(m, "ImageIoError", PyExc_OSError);
  py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_ArithmeticError);

  m.def("read_image", [](const std::string& path) { return to_array(read_image(path)); }, py::arg("path"),
        "Read a PGM (P2/P5, 8-bit) or PNG file as a float array in [0, 1].");
  m.def(
      "write_image",
      [](const Array& img, const std::string& path) { write_image(to_image(img), path, format_for_path(path)); },
      py::arg("image"), py::arg("path"), "Write an image; the format follows the file extension.");

  m.def(
      "make_synthetic",
      [](const std::string& kind, std::size_t size, std::uint64_t seed) {
        return to_array(make_synthetic(parse_synthetic_kind(kind), size, seed));
      },
      py::arg("kind") = "square-circle", py::arg("size") = 128, py::arg("seed") = 0);

  m.def(
      "degrade",
      [](const Array& u, double sigma, std::uint64_t seed, const std::string& kernel) {
        return to_array(degrade(to_image(u), {parse_blur_kernel(kernel), sigma, seed}));
      },
      py::arg("image"), py::arg("sigma"), py::arg("seed") = 0, py::arg("kernel") = "average5",
      "Blur with the periodic kernel and add seeded Gaussian noise (no clipping).");

  m.def(
      "restore",
      [](const Array& z, const std::string& mode, double lam, double sigma, double gamma, double delta,
         std::size_t max_iters, double tol, bool freeze_params) {
        SolverConfig cfg;
        cfg.mode = parse_regularizer_mode(mode);
        cfg.base_lambda = lam;
        cfg.sigma = sigma;
        cfg.gamma = gamma;
        cfg.delta = delta;
        cfg.max_iters = max_iters;
        cfg.rel_tol = tol;
        cfg.freeze_params = freeze_params;
        const Image obs = to_image(z);
        RestoreResult res;
        {
          py::gil_scoped_release release;
          res = restore(obs, cfg);
        }
        py::list history;
        for (const auto& r : res.history) history.append(py::make_tuple(r.k, r.objective, r.rel_change, r.m_norm_step));
        py::dict out;
        out["image"] = to_array(res.image);
        out["iterations"] = res.iterations;
        out["converged"] = res.converged;
        out["final_objective"] = res.final_objective;
        out["delta_used"] = res.delta_used;
        out["history"] = history;
        return out;
      },
      py::arg("z"), py::arg("mode") = "tntf", py::arg("lam") = 2e-4, py::arg("sigma") = 0.0, py::arg("gamma") = 1.99,
      py::arg("delta") = 0.5, py::arg("max_iters") = 400, py::arg("tol") = 1e-9, py::arg("freeze_params") = false,
      "Run PD3O. Returns a dict with image, iterations, converged, final_objective, delta_used and history\n"
      "(tuples of k, objective, rel_change, m_norm_step).");

  m.def("psnr", [](const Array& ref, const Array& test) { return psnr(to_image(ref), to_image(test)); },
        py::arg("ref"), py::arg("test"));
  m.def("ssim", [](const Array& ref, const Array& test) { return ssim(to_image(ref), to_image(test)); },
        py::arg("ref"), py::arg("test"));

  m.def(
      "verify_tffb",
      [](const std::string& bank, std::size_t grid) {
        if (bank != "dhf" && bank != "dct") throw py::value_error("bank must be 'dhf' or 'dct'");
        const auto rep = verify_tffb(bank == "dhf" ? dhf_bank(1) : dct_bank(1), grid);
        py::dict out;
        out["tffb"] = rep.max_tffb_residual;
        out["pou"] = rep.max_pou_residual;
        return out;
      },
      py::arg("bank") = "dhf", py::arg("grid") = 64);

  m.def(
      "analysis",
      [](const Array& img, const std::string& mode) {
        const Image u = to_image(img);
        AnalysisMode am = AnalysisMode::tntf;
        if (mode == "dhf") am = AnalysisMode::dhf_only;
        else if (mode == "dct") am = AnalysisMode::dct_only;
        else if (mode == "dhf+dct") am = AnalysisMode::dhf_dct;
        else if (mode != "tntf") throw py::value_error("mode must be tntf, dhf, dct or dhf+dct");
        const AnalysisOperator A(am);
        const auto s = A.apply(u);
        return py::make_tuple(flat_array(s.s1, s.s1.size() / u.size(), u.height(), u.width()),
                              flat_array(s.s2, s.s2.size() / u.size(), u.height(), u.width()));
      },
      py::arg("image"), py::arg("mode") = "tntf",
      "Penalized framelet coefficients (s1, s2) as (planes, height, width) arrays.");
}
