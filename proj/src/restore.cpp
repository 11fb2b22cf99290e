#include "mbinv/restore.hpp"

#include <algorithm>
#include <cmath>

#include "mbinv/error.hpp"

namespace mbinv {

TransferModel parse_transfer_model(const std::string& s) {
  if (s == "kernel") return TransferModel::kernel;
  if (s == "analytic") return TransferModel::analytic;
  throw Error(ErrorKind::invalid_argument, "unknown transfer model: " + s);
}

const char* to_string(TransferModel t) { return t == TransferModel::kernel ? "kernel" : "analytic"; }

Spectrum blur_transfer(const MotionParams& params, int rows, int cols, TransferModel model) {
  if (model == TransferModel::analytic) return psf_transfer(params, rows, cols);
  const Psf psf = psf_kernel(params);
  if (psf.kernel.rows > rows || psf.kernel.cols > cols) {
    throw Error(ErrorKind::size, "kernel larger than image",
                {{"kernel", psf.kernel.rows}, {"image", {rows, cols}}});
  }
  return kernel_transfer(psf.kernel, rows, cols);
}

Image wiener_deblur(const Image& blurred, const MotionParams& params, const WienerConfig& cfg) {
  validate(blurred);
  const bool full = cfg.signal_psd.has_value() || cfg.noise_psd.has_value();
  if (full) {
    if (!cfg.signal_psd || !cfg.noise_psd) {
      throw Error(ErrorKind::invalid_argument, "signal_psd and noise_psd must be given together");
    }
    if (!cfg.signal_psd->same_shape(blurred) || !cfg.noise_psd->same_shape(blurred)) {
      throw Error(ErrorKind::dimension, "PSD shape differs from image shape");
    }
    for (double v : cfg.signal_psd->px)
      if (!(v >= 0.0)) throw Error(ErrorKind::invalid_argument, "signal_psd must be non-negative");
    for (double v : cfg.noise_psd->px)
      if (!(v >= 0.0)) throw Error(ErrorKind::invalid_argument, "noise_psd must be non-negative");
  } else if (!(cfg.nsr >= 0.0) || !std::isfinite(cfg.nsr)) {
    throw Error(ErrorKind::invalid_argument, "nsr must be finite and >= 0", {{"nsr", cfg.nsr}});
  }

  const Spectrum H = blur_transfer(params, blurred.rows, blurred.cols, cfg.transfer);
  if (!full && cfg.nsr == 0.0) {
    double hmin = INFINITY;
    for (const auto& h : H.bins) hmin = std::min(hmin, std::abs(h));
    if (hmin < 1e-12) {
      throw Error(ErrorKind::singular_filter, "nsr = 0 with zeros in H; use inverse_filter",
                  {{"min_abs_H", hmin}});
    }
  }
  Spectrum G = dft2(blurred);
  for (std::size_t i = 0; i < G.bins.size(); ++i) {
    const cplx h = H.bins[i];
    const double h2 = std::norm(h);
    cplx lam;
    if (full) {
      const double S = cfg.signal_psd->px[i], N = cfg.noise_psd->px[i];
      const double den = h2 * S + N;
      lam = den > 0.0 ? std::conj(h) * S / den : cplx(0.0, 0.0);
    } else {
      const double den = h2 + cfg.nsr;
      lam = den > 0.0 ? std::conj(h) / den : cplx(0.0, 0.0);
    }
    G.bins[i] *= lam;
  }
  Image out = idft2(G);
  out.range_hint = blurred.range_hint;
  for (double& v : out.px) v = std::max(v, 0.0);
  return out;
}

Image inverse_filter(const Image& blurred, const MotionParams& params, double floor,
                     TransferModel transfer) {
  validate(blurred);
  if (!(floor > 0.0) || !std::isfinite(floor)) {
    throw Error(ErrorKind::invalid_argument, "floor must be finite and > 0", {{"floor", floor}});
  }
  const Spectrum H = blur_transfer(params, blurred.rows, blurred.cols, transfer);
  Spectrum G = dft2(blurred);
  for (std::size_t i = 0; i < G.bins.size(); ++i) {
    const cplx h = H.bins[i];
    G.bins[i] = std::abs(h) >= floor ? G.bins[i] / h : cplx(0.0, 0.0);
  }
  Image out = idft2(G);
  out.range_hint = blurred.range_hint;
  return out;
}

}  // namespace mbinv
