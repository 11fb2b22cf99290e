#pragma once

#include "json.hpp"
#include "mbinv/estimate.hpp"
#include "mbinv/image.hpp"

namespace mbinv {

struct BlindConfig {
  bool gradient = true;             // spectrum of central-difference gradients
  double edge_percentile = 95.0;    // gradient-magnitude gate for stripe edges
  int segment_length = 16;          // rays per TLS segment
  double segment_overlap = 0.5;
  int refine_iterations = 3;
  double spectrum_sigma = 1.0;      // Gaussian smoothing of the log spectrum
  int stripe_half_window = 16;      // samples each side for along-stripe smoothing
  double min_coherence = 0.12;      // structure-tensor coherence gate
  double prominence_fraction = 0.25;
  int profile_band_divisor = 4;     // perpendicular averaging half-width = min(rows,cols)/divisor
  double max_spacing_dispersion = 0.25;
  double max_spacing_deviation = 0.25;  // per-spacing distance from a multiple of the median
};

struct AngleEstimate {
  double theta_deg = 0.0;
  nlohmann::json diagnostics = nlohmann::json::object();
};

struct LengthEstimate {
  double length_px = 0.0;
  double spacing_bins = 0.0;
  nlohmann::json diagnostics = nlohmann::json::object();
};

// Windowed log-magnitude spectrum used by the blind estimators (DC centred,
// not normalized).
Image blind_spectrum(const Image& img, bool gradient);

AngleEstimate estimate_angle_spectrum(const Image& blurred, const BlindConfig& cfg = {});
LengthEstimate estimate_length_spectrum(const Image& blurred, double theta_deg,
                                        const BlindConfig& cfg = {});
// Angle then length; method "spectral-blind".
EstimateReport estimate_blind(const Image& blurred, const BlindConfig& cfg = {});
// Negative cepstral peak; method "cepstrum".
EstimateReport estimate_cepstrum(const Image& blurred);

}  // namespace mbinv
