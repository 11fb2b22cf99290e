#pragma once

#include "mbinv/image.hpp"

namespace mbinv {

// Mean SSIM, 11x11 Gaussian window (sigma 1.5), K1 = 0.01, K2 = 0.03,
// R = range_hint. Only window positions fully inside the image contribute;
// the window shrinks to the largest odd size that fits for small images.
double ssim(const Image& test, const Image& reference);

// 10 log10(R^2 / MSE); +infinity when MSE = 0.
double psnr(const Image& test, const Image& reference);

}  // namespace mbinv
