#pragma once

#include <limits>
#include <string>

#include "json.hpp"

namespace mbinv {

// Method tags: "freq-ref", "moment-ref", "spectral-blind", "cepstrum".
struct EstimateReport {
  std::string method;
  double theta_deg = std::numeric_limits<double>::quiet_NaN();
  double length_px = std::numeric_limits<double>::quiet_NaN();
  bool blur_detected = true;
  nlohmann::json diagnostics = nlohmann::json::object();
};

}  // namespace mbinv
