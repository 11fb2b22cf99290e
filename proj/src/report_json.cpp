#include "mbinv/report_json.hpp"

#include <cmath>

namespace mbinv {

nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

nlohmann::json to_json(const EstimateReport& rep) {
  return {{"method", rep.method},
          {"theta_deg", finite_or_null(rep.theta_deg)},
          {"length_px", finite_or_null(rep.length_px)},
          {"blur_detected", rep.blur_detected},
          {"diagnostics", rep.diagnostics}};
}

nlohmann::json to_json(const MomentSet& m) {
  nlohmann::json values = nlohmann::json::array();
  for (const auto& [p, q] : m.indices()) {
    values.push_back({{"p", p}, {"q", q}, {"value", finite_or_null(m.get(p, q))}});
  }
  return {{"max_order", m.max_order()}, {"frame", "centered"}, {"values", values}};
}

nlohmann::json to_json(const FreqInvariantSample& s) {
  nlohmann::json xi = nullptr;
  if (!s.skipped) {
    xi = {{"re", s.xi.real()}, {"im", s.xi.imag()}, {"abs", std::abs(s.xi)}, {"arg", std::arg(s.xi)}};
  }
  return {{"u", s.u},
          {"v", s.v},
          {"xi", xi},
          {"predicted", s.predicted},
          {"residual", finite_or_null(s.residual)},
          {"f_magnitude", s.f_magnitude},
          {"skipped", s.skipped},
          {"well_conditioned", s.well_conditioned}};
}

nlohmann::json to_json(const MotionParams& p) {
  return {{"theta_deg", p.theta_deg}, {"length_px", p.length_px}};
}

nlohmann::json kernel_to_json(const Psf& psf) {
  nlohmann::json rows = nlohmann::json::array();
  double sum = 0.0;
  for (int r = 0; r < psf.kernel.rows; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < psf.kernel.cols; ++c) {
      row.push_back(psf.kernel(r, c));
      sum += psf.kernel(r, c);
    }
    rows.push_back(row);
  }
  return {{"size", psf.kernel.rows},
          {"params", to_json(psf.params)},
          {"rasterization", psf.rasterization},
          {"sum", sum},
          {"kernel", rows}};
}

}  // namespace mbinv
