#pragma once

#include <complex>
#include <vector>

#include "mbinv/image.hpp"

namespace mbinv {

using cplx = std::complex<double>;

// Row-major DFT bins in storage order: bin (kr, kc) at bins[kr * cols + kc].
// Unnormalized forward transform, 1/(rows*cols) on the inverse.
//
// Signed frequencies: u is horizontal (columns), v is vertical in the y-up
// sense. Bin (u, v) is stored at column u mod cols, row (-v) mod rows.
struct Spectrum {
  int rows = 0;
  int cols = 0;
  std::vector<cplx> bins;

  Spectrum() = default;
  Spectrum(int rows, int cols);

  cplx& operator()(int r, int c) { return bins[static_cast<std::size_t>(r) * cols + c]; }
  const cplx& operator()(int r, int c) const {
    return bins[static_cast<std::size_t>(r) * cols + c];
  }

  std::size_t index_uv(int u, int v) const;
  cplx& at_uv(int u, int v) { return bins[index_uv(u, v)]; }
  const cplx& at_uv(int u, int v) const { return bins[index_uv(u, v)]; }
};

// Centred signed index of storage bin k in [0, n): k for k <= n/2, k - n otherwise.
int signed_bin(int k, int n);
// Signed (u, v) of storage bin (r, c).
int bin_u(int c, int cols);
int bin_v(int r, int rows);

Spectrum dft2(const Image& img);
Spectrum dft2(const Spectrum& x);
Spectrum idft2_complex(const Spectrum& spec);

// Real part of the inverse. Imaginary residue above 1e-9 is reported through
// warn(); its max magnitude is written to *max_imag when given.
Image idft2(const Spectrum& spec, double* max_imag = nullptr);

// Quadrant swap placing storage index 0 at (rows/2, cols/2).
Image fftshift(const Image& img);
Spectrum fftshift(const Spectrum& spec);

// log(1 + |bin|), DC centred, normalized to [0,1].
Image log_magnitude(const Spectrum& spec);

// Real part of idft2(log(eps + |dft2(img)|)), eps = 1e-12, DC centred (not normalized).
Image cepstrum2(const Image& img);

}  // namespace mbinv
