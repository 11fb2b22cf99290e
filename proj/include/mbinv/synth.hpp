#pragma once

#include <cstdint>

#include "mbinv/image.hpp"

namespace mbinv {

// Smooth ramp plus 12 random filled ellipses plus 5% Gaussian texture,
// normalized to [0,1]. Deterministic in (rows, cols, seed).
Image phantom(int rows, int cols, std::uint64_t seed);

// Independent uniform [0,1) pixels.
Image random_image(int rows, int cols, std::uint64_t seed);

// Single unit pixel at (rows/2, cols/2).
Image impulse(int rows, int cols);

}  // namespace mbinv
