#include "mbinv/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <sstream>

#include "mbinv/error.hpp"

namespace mbinv {

namespace {

// The FFTW planner is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  fftw_complex* p;
  explicit FftwBuffer(std::size_t n)
      : p(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (!p) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(p); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
};

void run_fft(int rows, int cols, const cplx* in, cplx* out, int sign) {
  const std::size_t n = static_cast<std::size_t>(rows) * cols;
  FftwBuffer buf(n);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_2d(rows, cols, buf.p, buf.p, sign, FFTW_ESTIMATE);
  }
  if (!plan) throw Error(ErrorKind::size, "FFT plan creation failed", {{"rows", rows}, {"cols", cols}});
  static_assert(sizeof(cplx) == sizeof(fftw_complex));
  std::memcpy(static_cast<void*>(buf.p), static_cast<const void*>(in), sizeof(fftw_complex) * n);
  fftw_execute(plan);
  std::memcpy(static_cast<void*>(out), static_cast<const void*>(buf.p), sizeof(fftw_complex) * n);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
}

inline int wrap(int k, int n) {
  const int m = k % n;
  return m < 0 ? m + n : m;
}

}  // namespace

Spectrum::Spectrum(int r, int c) : rows(r), cols(c) {
  if (r <= 0 || c <= 0) {
    throw Error(ErrorKind::invalid_argument, "spectrum dimensions must be positive",
                {{"rows", r}, {"cols", c}});
  }
  bins.assign(static_cast<std::size_t>(r) * c, cplx(0.0, 0.0));
}

std::size_t Spectrum::index_uv(int u, int v) const {
  return static_cast<std::size_t>(wrap(-v, rows)) * cols + wrap(u, cols);
}

int signed_bin(int k, int n) { return k <= n / 2 ? k : k - n; }
int bin_u(int c, int cols) { return signed_bin(c, cols); }
int bin_v(int r, int rows) { return signed_bin((rows - r) % rows, rows); }

Spectrum dft2(const Image& img) {
  validate(img);
  Spectrum s(img.rows, img.cols);
  std::vector<cplx> in(img.px.begin(), img.px.end());
  run_fft(img.rows, img.cols, in.data(), s.bins.data(), FFTW_FORWARD);
  return s;
}

Spectrum dft2(const Spectrum& x) {
  Spectrum s(x.rows, x.cols);
  run_fft(x.rows, x.cols, x.bins.data(), s.bins.data(), FFTW_FORWARD);
  return s;
}

Spectrum idft2_complex(const Spectrum& spec) {
  Spectrum s(spec.rows, spec.cols);
  run_fft(spec.rows, spec.cols, spec.bins.data(), s.bins.data(), FFTW_BACKWARD);
  const double scale = 1.0 / (static_cast<double>(spec.rows) * spec.cols);
  for (auto& b : s.bins) b *= scale;
  return s;
}

Image idft2(const Spectrum& spec, double* max_imag) {
  const Spectrum s = idft2_complex(spec);
  Image out(spec.rows, spec.cols);
  double mi = 0.0;
  for (std::size_t i = 0; i < s.bins.size(); ++i) {
    out.px[i] = s.bins[i].real();
    mi = std::max(mi, std::abs(s.bins[i].imag()));
  }
  if (max_imag) *max_imag = mi;
  if (mi > 1e-9) {
    std::ostringstream msg;
    msg << "idft2 discarded imaginary residue up to " << mi;
    warn(msg.str());
  }
  return out;
}

Image fftshift(const Image& img) {
  Image out(img.rows, img.cols, 0.0, img.range_hint);
  const int hr = img.rows / 2, hc = img.cols / 2;
  for (int r = 0; r < img.rows; ++r) {
    const int rr = (r + hr) % img.rows;
    for (int c = 0; c < img.cols; ++c) out(rr, (c + hc) % img.cols) = img(r, c);
  }
  return out;
}

Spectrum fftshift(const Spectrum& spec) {
  Spectrum out(spec.rows, spec.cols);
  const int hr = spec.rows / 2, hc = spec.cols / 2;
  for (int r = 0; r < spec.rows; ++r) {
    const int rr = (r + hr) % spec.rows;
    for (int c = 0; c < spec.cols; ++c) out(rr, (c + hc) % spec.cols) = spec(r, c);
  }
  return out;
}

Image log_magnitude(const Spectrum& spec) {
  Image mag(spec.rows, spec.cols);
  for (std::size_t i = 0; i < spec.bins.size(); ++i) mag.px[i] = std::log1p(std::abs(spec.bins[i]));
  return normalize(fftshift(mag));
}

Image cepstrum2(const Image& img) {
  const Spectrum g = dft2(img);
  Spectrum lg(g.rows, g.cols);
  for (std::size_t i = 0; i < g.bins.size(); ++i) lg.bins[i] = std::log(1e-12 + std::abs(g.bins[i]));
  // log|G| is real and even, so the inverse is real up to rounding
  const Spectrum c = idft2_complex(lg);
  Image out(g.rows, g.cols);
  for (std::size_t i = 0; i < c.bins.size(); ++i) out.px[i] = c.bins[i].real();
  return fftshift(out);
}

}  // namespace mbinv
