#include "mbinv/psf.hpp"

#include <cmath>
#include <numbers>

#include "mbinv/error.hpp"

namespace mbinv {

double wrap_angle_180(double theta_deg) {
  double t = std::fmod(theta_deg, 180.0);
  if (t < 0.0) t += 180.0;
  if (t >= 180.0 || t == 0.0) t = 0.0;  // also folds -0 to +0
  return t;
}

MotionParams MotionParams::make(double theta_deg, double length_px) {
  if (!std::isfinite(theta_deg)) {
    throw Error(ErrorKind::invalid_argument, "theta must be finite");
  }
  if (!std::isfinite(length_px) || !(length_px > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "blur length must be finite and positive",
                {{"length_px", length_px}});
  }
  return MotionParams{wrap_angle_180(theta_deg), length_px};
}

double sinc(double x) {
  const double px = std::numbers::pi * x;
  if (std::abs(x) < 1e-8) return 1.0 - px * px / 6.0;
  return std::sin(px) / px;
}

double asinc(double y) {
  if (!(y >= 0.0 && y <= 1.0)) {
    throw Error(ErrorKind::branch, "asinc argument outside principal branch [0,1]", {{"y", y}});
  }
  if (y == 1.0) return 0.0;
  if (y == 0.0) return 1.0;
  double lo = 0.0, hi = 1.0;  // sinc decreasing on [0,1]
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (sinc(mid) > y) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

void exact_cos_sin(double theta_deg, double& c, double& s) {
  const double t = wrap_angle_180(theta_deg);
  if (t == 0.0) { c = 1.0; s = 0.0; return; }
  if (t == 90.0) { c = 0.0; s = 1.0; return; }
  const double r = t * std::numbers::pi / 180.0;
  c = std::cos(r);
  s = std::sin(r);
}

Psf psf_kernel(const MotionParams& params) {
  const double L = params.length_px;
  if (!(L >= 1.0) || !std::isfinite(L)) {
    throw Error(ErrorKind::invalid_argument, "psf_kernel requires L >= 1", {{"length_px", L}});
  }
  const int h = static_cast<int>(std::ceil(L / 2.0));
  const int S = 2 * h + 1;
  double c, s;
  exact_cos_sin(params.theta_deg, c, s);
  const bool xmajor = std::abs(c) >= std::abs(s);
  const double a = xmajor ? c : s;  // major-axis direction cosine
  const double b = xmajor ? s : c;  // minor-axis direction cosine
  const double T = L / 2.0;

  Image K(S, S, 0.0);
  for (int k = -h; k <= h; ++k) {
    // segment parameter range whose major coordinate lies in [k-1/2, k+1/2]
    double lo = (k - 0.5) / a, hi = (k + 0.5) / a;
    if (lo > hi) std::swap(lo, hi);
    lo = std::max(lo, -T);
    hi = std::min(hi, T);
    if (!(hi > lo)) continue;
    const double w = (hi - lo) / L;
    const double minor = 0.5 * (lo + hi) * b;
    const double m0 = std::floor(minor);
    const double f = minor - m0;
    const int mi = static_cast<int>(m0);
    const double parts[2] = {w * (1.0 - f), w * f};
    for (int j = 0; j < 2; ++j) {
      if (parts[j] <= 0.0) continue;
      const int m = mi + j;
      if (xmajor) K(h - m, k + h) += parts[j];
      else K(h - k, m + h) += parts[j];
    }
  }

  Image sym(S, S, 0.0);
  for (int r = 0; r < S; ++r)
    for (int q = 0; q < S; ++q) sym(r, q) = 0.5 * (K(r, q) + K(S - 1 - r, S - 1 - q));
  double total = 0.0;
  for (double v : sym.px) total += v;
  for (double& v : sym.px) v /= total;
  return Psf{std::move(sym), params, kRasterization};
}

Spectrum psf_transfer(const MotionParams& params, int rows, int cols) {
  Spectrum H(rows, cols);
  double c, s;
  exact_cos_sin(params.theta_deg, c, s);
  const double L = params.length_px;
  for (int r = 0; r < rows; ++r) {
    const double v = bin_v(r, rows);
    for (int q = 0; q < cols; ++q) {
      const double u = bin_u(q, cols);
      H(r, q) = cplx(sinc(L * (u * c / cols + v * s / rows)), 0.0);
    }
  }
  return H;
}

double psf_moment(const MotionParams& params, int p, int q) {
  if (p < 0 || q < 0) throw Error(ErrorKind::invalid_argument, "moment orders must be >= 0");
  if ((p + q) % 2 != 0) return 0.0;
  double c, s;
  exact_cos_sin(params.theta_deg, c, s);
  return std::pow(params.length_px / 2.0, p + q) * std::pow(c, p) * std::pow(s, q) / (p + q + 1);
}

Image embed_kernel(const Image& kernel, int rows, int cols) {
  Image out(rows, cols, 0.0);
  const int hr = kernel.rows / 2, hc = kernel.cols / 2;
  for (int r = 0; r < kernel.rows; ++r) {
    const int rr = ((r - hr) % rows + rows) % rows;
    for (int c = 0; c < kernel.cols; ++c) {
      const int cc = ((c - hc) % cols + cols) % cols;
      out(rr, cc) += kernel(r, c);
    }
  }
  return out;
}

Spectrum kernel_transfer(const Image& kernel, int rows, int cols) {
  return dft2(embed_kernel(kernel, rows, cols));
}

}  // namespace mbinv
