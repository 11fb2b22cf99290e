#include "mbinv/synth.hpp"

#include <cmath>
#include <numbers>

#include "mbinv/degrade.hpp"

namespace mbinv {

Image phantom(int rows, int cols, std::uint64_t seed) {
  SplitMix64 rng(seed);
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  Image f(rows, cols, 0.0);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      f(r, c) = 0.2 + 0.1 * c / cols + 0.05 * r / rows;
  for (int e = 0; e < 12; ++e) {
    const double cx = uni(0.15, 0.85), cy = uni(0.15, 0.85);
    const double a = uni(0.04, 0.2), b = uni(0.04, 0.2);
    const double ang = uni(0.0, std::numbers::pi);
    const double val = uni(-0.3, 0.5);
    const double ca = std::cos(ang), sa = std::sin(ang);
    for (int r = 0; r < rows; ++r) {
      const double y = static_cast<double>(r) / rows - cy;
      for (int c = 0; c < cols; ++c) {
        const double x = static_cast<double>(c) / cols - cx;
        const double xr = x * ca + y * sa, yr = -x * sa + y * ca;
        if ((xr / a) * (xr / a) + (yr / b) * (yr / b) <= 1.0) f(r, c) += val;
      }
    }
  }
  for (double& v : f.px) v += 0.05 * rng.gaussian();
  return normalize(f);
}

Image random_image(int rows, int cols, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Image f(rows, cols, 0.0);
  for (double& v : f.px) v = rng.uniform();
  return f;
}

Image impulse(int rows, int cols) {
  Image f(rows, cols, 0.0);
  f(rows / 2, cols / 2) = 1.0;
  return f;
}

}  // namespace mbinv
