#pragma once

#include <string>

#include "mbinv/image.hpp"
#include "mbinv/spectral.hpp"

namespace mbinv {

struct MotionParams {
  double theta_deg = 0.0;  // [0, 180)
  double length_px = 1.0;  // > 0

  // Normalizes theta into [0,180) and checks L.
  static MotionParams make(double theta_deg, double length_px);
};

// Maps any finite angle into [0, 180).
double wrap_angle_180(double theta_deg);

struct Psf {
  Image kernel;  // odd square, non-negative, unit sum, centrosymmetric
  MotionParams params;
  std::string rasterization;
};

inline constexpr const char* kRasterization = "segment-box-major/linear-minor";

// Normalized sinc: sin(pi x)/(pi x).
double sinc(double x);
// Inverse of sinc on its principal branch [0,1]; bisection to 1e-12.
double asinc(double y);

// cos/sin of theta with exact values at multiples of 90 degrees.
void exact_cos_sin(double theta_deg, double& c, double& s);

// Discrete motion kernel, size S = 2*ceil(L/2)+1.
Psf psf_kernel(const MotionParams& params);

// Analytic transfer sinc(L*(u cos/cols + v sin/rows)) on signed bins.
Spectrum psf_transfer(const MotionParams& params, int rows, int cols);

// Analytic PSF geometric moment of order (p,q).
double psf_moment(const MotionParams& params, int p, int q);

// Kernel placed on a rows x cols torus with its centre at (0,0).
Image embed_kernel(const Image& kernel, int rows, int cols);
// dft2 of the embedded kernel.
Spectrum kernel_transfer(const Image& kernel, int rows, int cols);

}  // namespace mbinv
