#pragma once

#include <cstdint>
#include <string>

#include "mbinv/image.hpp"
#include "mbinv/psf.hpp"

namespace mbinv {

enum class Boundary { zero, replicate, circular };
enum class Extent { same, full };

Boundary parse_boundary(const std::string& s);
Extent parse_extent(const std::string& s);
const char* to_string(Boundary b);
const char* to_string(Extent e);

struct NoiseSpec {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

// SplitMix64: state += 0x9E3779B97F4A7C15, then the xor-shift-multiply finalizer.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  // (x >> 11) * 2^-53, in [0, 1)
  double uniform();
  // ((x >> 11) + 1) * 2^-53, in (0, 1]
  double uniform_open0();
  // Box-Muller cosine branch: sqrt(-2 ln u1) cos(2 pi u2), u1 drawn first.
  double gaussian();

 private:
  std::uint64_t state_;
};

// Linear convolution with an odd-sized kernel (flipped). `full` returns
// (rows+S-1) x (cols+S-1); `same` crops centrally. Samples outside the input
// follow `boundary`.
Image convolve(const Image& img, const Image& kernel, Boundary boundary, Extent extent);
Image convolve(const Image& img, const Psf& psf, Boundary boundary, Extent extent);

Image add_noise(const Image& img, const NoiseSpec& spec);

Image degrade(const Image& img, const MotionParams& params, const NoiseSpec& noise,
              Boundary boundary, Extent extent);

}  // namespace mbinv
