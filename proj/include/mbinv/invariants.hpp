#pragma once

#include <utility>
#include <vector>

#include "mbinv/estimate.hpp"
#include "mbinv/image.hpp"
#include "mbinv/psf.hpp"
#include "mbinv/spectral.hpp"

namespace mbinv {

// Values for all (p,q) with p+q <= max_order, centred y-up grid.
class MomentSet {
 public:
  MomentSet() = default;
  explicit MomentSet(int max_order);

  int max_order() const { return max_order_; }
  double get(int p, int q) const;
  void set(int p, int q, double v);
  // (p,q) pairs in order of increasing p+q, then decreasing p.
  std::vector<std::pair<int, int>> indices() const;

 private:
  std::size_t slot(int p, int q) const;
  int max_order_ = -1;
  std::vector<double> v_;
};

using BlurInvariantSet = MomentSet;

inline constexpr int kMaxMomentOrder = 8;

MomentSet geometric_moments(const Image& img, int max_order);

// Binomial double sum with PSF moments from the analytic formula.
MomentSet predict_blurred_moments(const MomentSet& f, const MotionParams& params, int max_order);
// Same sum with arbitrary PSF moments (e.g. of the discrete kernel).
MomentSet predict_blurred_moments(const MomentSet& f, const MomentSet& h, int max_order);

// Reference-based recovery from second-order moment shifts.
EstimateReport estimate_params_moments(const Image& reference, const Image& blurred);

// Recursive centrosymmetric-blur invariants.
BlurInvariantSet blur_invariants(const Image& img, int max_order);

// Reference-based recovery from the spectral ratio at the first bins.
EstimateReport estimate_params_freq(const Image& reference, const Image& blurred);

struct FreqInvariantSample {
  int u = 0;
  int v = 0;
  cplx xi{0.0, 0.0};
  double predicted = 1.0;
  double residual = 0.0;
  double f_magnitude = 0.0;
  bool skipped = false;          // |F| vanishes at this bin
  bool well_conditioned = false; // |F| > 1e-3 max|F|
};

// Measured G/F against sinc(b u + a v) with a, b from estimate_params_freq
// (b carries the sign of cos theta).
std::vector<FreqInvariantSample> xi_samples(const Image& reference, const Image& blurred,
                                            const std::vector<std::pair<int, int>>& bins);

}  // namespace mbinv
