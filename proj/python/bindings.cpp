#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mbinv/mbinv.hpp"

namespace py = pybind11;
using namespace mbinv;

namespace {

using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using ComplexArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

Image to_image(const RealArray& a, double range_hint = 1.0) {
  if (a.ndim() != 2) throw Error(ErrorKind::invalid_argument, "expected a 2-D array");
  const auto rows = static_cast<int>(a.shape(0)), cols = static_cast<int>(a.shape(1));
  std::vector<double> px(a.data(), a.data() + a.size());
  return Image(rows, cols, std::move(px), range_hint);
}

py::array_t<double> from_image(const Image& img) {
  py::array_t<double> out({img.rows, img.cols});
  std::copy(img.px.begin(), img.px.end(), out.mutable_data());
  return out;
}

Spectrum to_spectrum(const ComplexArray& a) {
  if (a.ndim() != 2) throw Error(ErrorKind::invalid_argument, "expected a 2-D array");
  Spectrum s(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
  std::copy(a.data(), a.data() + a.size(), s.bins.begin());
  return s;
}

py::array_t<std::complex<double>> from_spectrum(const Spectrum& s) {
  py::array_t<std::complex<double>> out({s.rows, s.cols});
  std::copy(s.bins.begin(), s.bins.end(), out.mutable_data());
  return out;
}

py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::dict moments_dict(const MomentSet& m) {
  py::dict d;
  for (const auto& [p, q] : m.indices()) d[py::make_tuple(p, q)] = m.get(p, q);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Motion-blur estimation and restoration";
  m.attr("__version__") = MBINV_VERSION;

  static py::exception<Error> exc(m, "MbinvError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::reinterpret_borrow<py::object>(exc.ptr())(e.what());
      inst.attr("kind") = to_string(e.kind());
      inst.attr("diagnostics") = to_py(e.diagnostics());
      PyErr_SetObject(exc.ptr(), inst.ptr());
    }
  });

  m.def("psf_kernel", [](double theta, double length) { return from_image(psf_kernel(MotionParams::make(theta, length)).kernel); },
        py::arg("theta"), py::arg("length"));
  m.def("psf_transfer",
        [](double theta, double length, int rows, int cols) {
          return from_spectrum(psf_transfer(MotionParams::make(theta, length), rows, cols));
        },
        py::arg("theta"), py::arg("length"), py::arg("rows"), py::arg("cols"));
  m.def("psf_moment", [](double theta, double length, int p, int q) { return psf_moment(MotionParams::make(theta, length), p, q); },
        py::arg("theta"), py::arg("length"), py::arg("p"), py::arg("q"));

  m.def("dft2", [](const RealArray& a) { return from_spectrum(dft2(to_image(a))); }, py::arg("image"));
  m.def("idft2", [](const ComplexArray& s) { return from_image(idft2(to_spectrum(s))); }, py::arg("spectrum"));
  m.def("log_magnitude", [](const RealArray& a) { return from_image(log_magnitude(dft2(to_image(a)))); }, py::arg("image"));
  m.def("cepstrum", [](const RealArray& a) { return from_image(cepstrum2(to_image(a))); }, py::arg("image"));

  m.def("convolve",
        [](const RealArray& a, const RealArray& k, const std::string& boundary, const std::string& extent) {
          return from_image(convolve(to_image(a), to_image(k), parse_boundary(boundary), parse_extent(extent)));
        },
        py::arg("image"), py::arg("kernel"), py::arg("boundary") = "zero", py::arg("extent") = "same");
  m.def("add_noise",
        [](const RealArray& a, double sigma, std::uint64_t seed) { return from_image(add_noise(to_image(a), {sigma, seed})); },
        py::arg("image"), py::arg("sigma"), py::arg("seed") = 0);
  m.def("degrade",
        [](const RealArray& a, double theta, double length, double sigma, std::uint64_t seed, const std::string& boundary,
           const std::string& extent) {
          return from_image(degrade(to_image(a), MotionParams::make(theta, length), {sigma, seed}, parse_boundary(boundary),
                                    parse_extent(extent)));
        },
        py::arg("image"), py::arg("theta"), py::arg("length"), py::arg("noise_sigma") = 0.0, py::arg("seed") = 0,
        py::arg("boundary") = "replicate", py::arg("extent") = "same");

  m.def("estimate_blind",
        [](const RealArray& a, bool gradient) {
          BlindConfig cfg;
          cfg.gradient = gradient;
          return to_py(to_json(estimate_blind(to_image(a), cfg)));
        },
        py::arg("blurred"), py::arg("gradient") = true);
  m.def("estimate_cepstrum", [](const RealArray& a) { return to_py(to_json(estimate_cepstrum(to_image(a)))); }, py::arg("blurred"));
  m.def("estimate_freq",
        [](const RealArray& ref, const RealArray& g) { return to_py(to_json(estimate_params_freq(to_image(ref), to_image(g)))); },
        py::arg("reference"), py::arg("blurred"));
  m.def("estimate_moments",
        [](const RealArray& ref, const RealArray& g) { return to_py(to_json(estimate_params_moments(to_image(ref), to_image(g)))); },
        py::arg("reference"), py::arg("blurred"));

  m.def("geometric_moments", [](const RealArray& a, int order) { return moments_dict(geometric_moments(to_image(a), order)); },
        py::arg("image"), py::arg("max_order"));
  m.def("blur_invariants", [](const RealArray& a, int order) { return moments_dict(blur_invariants(to_image(a), order)); },
        py::arg("image"), py::arg("max_order"));

  m.def("wiener_deblur",
        [](const RealArray& a, double theta, double length, double nsr, std::optional<RealArray> signal_psd,
           std::optional<RealArray> noise_psd, const std::string& transfer) {
          WienerConfig cfg;
          cfg.nsr = nsr;
          cfg.transfer = parse_transfer_model(transfer);
          if (signal_psd) cfg.signal_psd = to_image(*signal_psd);
          if (noise_psd) cfg.noise_psd = to_image(*noise_psd);
          return from_image(wiener_deblur(to_image(a), MotionParams::make(theta, length), cfg));
        },
        py::arg("blurred"), py::arg("theta"), py::arg("length"), py::arg("nsr") = 1e-3, py::arg("signal_psd") = py::none(),
        py::arg("noise_psd") = py::none(), py::arg("transfer") = "kernel");
  m.def("inverse_filter",
        [](const RealArray& a, double theta, double length, double floor, const std::string& transfer) {
          return from_image(inverse_filter(to_image(a), MotionParams::make(theta, length), floor, parse_transfer_model(transfer)));
        },
        py::arg("blurred"), py::arg("theta"), py::arg("length"), py::arg("floor") = 1e-3, py::arg("transfer") = "kernel");

  m.def("ssim", [](const RealArray& t, const RealArray& r, double range) { return ssim(to_image(t, range), to_image(r, range)); },
        py::arg("test"), py::arg("reference"), py::arg("data_range") = 1.0);
  m.def("psnr", [](const RealArray& t, const RealArray& r, double range) { return psnr(to_image(t, range), to_image(r, range)); },
        py::arg("test"), py::arg("reference"), py::arg("data_range") = 1.0);

  m.def("load_image", [](const std::string& path) { return from_image(load_image(path)); }, py::arg("path"));
  m.def("save_image", [](const RealArray& a, const std::string& path, int maxval) { save_image(to_image(a), path, maxval); },
        py::arg("image"), py::arg("path"), py::arg("maxval") = 255);

  m.def("phantom", [](int rows, int cols, std::uint64_t seed) { return from_image(phantom(rows, cols, seed)); },
        py::arg("rows"), py::arg("cols"), py::arg("seed") = 1);
  m.def("random_image", [](int rows, int cols, std::uint64_t seed) { return from_image(random_image(rows, cols, seed)); },
        py::arg("rows"), py::arg("cols"), py::arg("seed") = 1);
  m.def("impulse", [](int rows, int cols) { return from_image(impulse(rows, cols)); }, py::arg("rows"), py::arg("cols"));
}
