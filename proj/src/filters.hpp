#pragma once

// Internal helpers for spectral image analysis.

#include <vector>

#include "mbinv/image.hpp"

namespace mbinv::detail {

// Separable Gaussian, radius round(4 sigma), half-sample symmetric boundary.
Image gaussian_blur(const Image& img, double sigma);

// Sobel derivative along columns (dx) or rows (dy, row index increasing),
// half-sample symmetric boundary.
Image sobel_x(const Image& img);
Image sobel_y(const Image& img);

// np.gradient semantics: central differences inside, one-sided at the edges.
Image gradient_x(const Image& img);
Image gradient_y(const Image& img);

// Bilinear sample at fractional (row, col); coordinates clamped to the grid.
double sample_clamped(const Image& img, double r, double c);
// Bilinear sample; NaN when outside [0, rows-1] x [0, cols-1].
double sample_or_nan(const Image& img, double r, double c);

// Linear-interpolated percentile (0..100) of values (copied).
double percentile(std::vector<double> values, double pct);
double median(std::vector<double> values);

}  // namespace mbinv::detail
