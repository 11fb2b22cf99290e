#include "mbinv/degrade.hpp"

#include <cmath>
#include <numbers>

#include "mbinv/error.hpp"

namespace mbinv {

Boundary parse_boundary(const std::string& s) {
  if (s == "zero") return Boundary::zero;
  if (s == "replicate") return Boundary::replicate;
  if (s == "circular") return Boundary::circular;
  throw Error(ErrorKind::invalid_argument, "unknown boundary mode: " + s);
}

Extent parse_extent(const std::string& s) {
  if (s == "same") return Extent::same;
  if (s == "full") return Extent::full;
  throw Error(ErrorKind::invalid_argument, "unknown extent: " + s);
}

const char* to_string(Boundary b) {
  switch (b) {
    case Boundary::zero: return "zero";
    case Boundary::replicate: return "replicate";
    case Boundary::circular: return "circular";
  }
  return "?";
}

const char* to_string(Extent e) { return e == Extent::same ? "same" : "full"; }

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SplitMix64::uniform_open0() {
  return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
}

double SplitMix64::gaussian() {
  const double u1 = uniform_open0();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

inline int clamp_index(int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); }
inline int wrap_index(int i, int n) {
  const int m = i % n;
  return m < 0 ? m + n : m;
}

}  // namespace

Image convolve(const Image& img, const Image& kernel, Boundary boundary, Extent extent) {
  validate(img);
  validate(kernel);
  if (kernel.rows % 2 == 0 || kernel.cols % 2 == 0) {
    throw Error(ErrorKind::invalid_argument, "kernel dimensions must be odd",
                {{"rows", kernel.rows}, {"cols", kernel.cols}});
  }
  if (extent == Extent::same && (kernel.rows > img.rows || kernel.cols > img.cols)) {
    throw Error(ErrorKind::size, "kernel larger than image in same mode",
                {{"kernel", {kernel.rows, kernel.cols}}, {"image", {img.rows, img.cols}}});
  }
  if (boundary == Boundary::circular && extent == Extent::full) {
    throw Error(ErrorKind::invalid_argument, "circular boundary requires same extent");
  }
  const int hr = kernel.rows / 2, hc = kernel.cols / 2;
  // offset of output (0,0) in full-convolution coordinates
  const int orow = extent == Extent::same ? hr : 0;
  const int ocol = extent == Extent::same ? hc : 0;
  const int out_rows = extent == Extent::same ? img.rows : img.rows + kernel.rows - 1;
  const int out_cols = extent == Extent::same ? img.cols : img.cols + kernel.cols - 1;

  Image out(out_rows, out_cols, 0.0, img.range_hint);
  std::vector<int> col_src(out_cols);
  for (int kr = 0; kr < kernel.rows; ++kr) {
    for (int kc = 0; kc < kernel.cols; ++kc) {
      const double w = kernel(kr, kc);
      if (w == 0.0) continue;
      // full-convolution index (R, C) reads input (R - kr, C - kc)
      for (int c = 0; c < out_cols; ++c) {
        int sc = c + ocol - kc;
        if (sc < 0 || sc >= img.cols) {
          if (boundary == Boundary::zero) sc = -1;
          else if (boundary == Boundary::replicate) sc = clamp_index(sc, img.cols);
          else sc = wrap_index(sc, img.cols);
        }
        col_src[c] = sc;
      }
      for (int r = 0; r < out_rows; ++r) {
        int sr = r + orow - kr;
        if (sr < 0 || sr >= img.rows) {
          if (boundary == Boundary::zero) continue;
          sr = boundary == Boundary::replicate ? clamp_index(sr, img.rows) : wrap_index(sr, img.rows);
        }
        const double* src = &img.px[static_cast<std::size_t>(sr) * img.cols];
        double* dst = &out.px[static_cast<std::size_t>(r) * out_cols];
        for (int c = 0; c < out_cols; ++c) {
          const int sc = col_src[c];
          if (sc >= 0) dst[c] += w * src[sc];
        }
      }
    }
  }
  return out;
}

Image convolve(const Image& img, const Psf& psf, Boundary boundary, Extent extent) {
  return convolve(img, psf.kernel, boundary, extent);
}

Image add_noise(const Image& img, const NoiseSpec& spec) {
  if (!(spec.sigma >= 0.0) || !std::isfinite(spec.sigma)) {
    throw Error(ErrorKind::invalid_argument, "noise sigma must be finite and >= 0",
                {{"sigma", spec.sigma}});
  }
  Image out = img;
  if (spec.sigma == 0.0) return out;
  SplitMix64 rng(spec.seed);
  for (double& v : out.px) v += spec.sigma * rng.gaussian();
  return out;
}

Image degrade(const Image& img, const MotionParams& params, const NoiseSpec& noise,
              Boundary boundary, Extent extent) {
  return add_noise(convolve(img, psf_kernel(params), boundary, extent), noise);
}

}  // namespace mbinv
