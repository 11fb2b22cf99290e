#include "mbinv/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mbinv/error.hpp"

namespace mbinv {

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void check_order(int max_order) {
  if (max_order < 0 || max_order > kMaxMomentOrder) {
    throw Error(ErrorKind::invalid_argument, "moment order must be in 0..8",
                {{"max_order", max_order}});
  }
}

constexpr double rad2deg = 180.0 / std::numbers::pi;

}  // namespace

MomentSet::MomentSet(int max_order) : max_order_(max_order) {
  check_order(max_order);
  v_.assign(static_cast<std::size_t>(max_order + 1) * (max_order + 1), 0.0);
}

std::size_t MomentSet::slot(int p, int q) const {
  if (p < 0 || q < 0 || p + q > max_order_) {
    throw Error(ErrorKind::invalid_argument, "moment index out of range",
                {{"p", p}, {"q", q}, {"max_order", max_order_}});
  }
  return static_cast<std::size_t>(p) * (max_order_ + 1) + q;
}

double MomentSet::get(int p, int q) const { return v_[slot(p, q)]; }
void MomentSet::set(int p, int q, double v) { v_[slot(p, q)] = v; }

std::vector<std::pair<int, int>> MomentSet::indices() const {
  std::vector<std::pair<int, int>> out;
  for (int n = 0; n <= max_order_; ++n)
    for (int p = n; p >= 0; --p) out.emplace_back(p, n - p);
  return out;
}

MomentSet geometric_moments(const Image& img, int max_order) {
  check_order(max_order);
  validate(img);
  const CenteredGrid grid(img);
  const int n = max_order + 1;
  std::vector<long double> acc(static_cast<std::size_t>(n) * n, 0.0L);
  std::vector<double> xp(n), yp(n);
  for (int r = 0; r < img.rows; ++r) {
    const double y = grid.y(r);
    yp[0] = 1.0;
    for (int k = 1; k < n; ++k) yp[k] = yp[k - 1] * y;
    for (int c = 0; c < img.cols; ++c) {
      const double f = img(r, c);
      if (f == 0.0) continue;
      const double x = grid.x(c);
      xp[0] = f;
      for (int k = 1; k < n; ++k) xp[k] = xp[k - 1] * x;
      for (int p = 0; p < n; ++p)
        for (int q = 0; p + q < n; ++q)
          acc[static_cast<std::size_t>(p) * n + q] += static_cast<long double>(xp[p] * yp[q]);
    }
  }
  MomentSet m(max_order);
  for (int p = 0; p < n; ++p)
    for (int q = 0; p + q < n; ++q) m.set(p, q, static_cast<double>(acc[static_cast<std::size_t>(p) * n + q]));
  return m;
}

MomentSet predict_blurred_moments(const MomentSet& f, const MomentSet& h, int max_order) {
  check_order(max_order);
  if (f.max_order() < max_order || h.max_order() < max_order) {
    throw Error(ErrorKind::invalid_argument, "moment sets incomplete for requested order");
  }
  MomentSet g(max_order);
  for (int p = 0; p <= max_order; ++p) {
    for (int q = 0; p + q <= max_order; ++q) {
      long double s = 0.0L;
      for (int k = 0; k <= p; ++k)
        for (int l = 0; l <= q; ++l)
          s += static_cast<long double>(binom(p, k) * binom(q, l)) * h.get(k, l) *
               f.get(p - k, q - l);
      g.set(p, q, static_cast<double>(s));
    }
  }
  return g;
}

MomentSet predict_blurred_moments(const MomentSet& f, const MotionParams& params, int max_order) {
  check_order(max_order);
  MomentSet h(max_order);
  for (int p = 0; p <= max_order; ++p)
    for (int q = 0; p + q <= max_order; ++q) h.set(p, q, psf_moment(params, p, q));
  return predict_blurred_moments(f, h, max_order);
}

EstimateReport estimate_params_moments(const Image& reference, const Image& blurred) {
  const MomentSet mf = geometric_moments(reference, 2);
  const MomentSet mg = geometric_moments(blurred, 2);
  const double m00 = mf.get(0, 0);
  if (!(m00 > 0.0)) {
    throw Error(ErrorKind::division, "reference image has non-positive mass", {{"m00", m00}});
  }
  const double d20 = mg.get(2, 0) - mf.get(2, 0);
  const double d02 = mg.get(0, 2) - mf.get(0, 2);
  const double d11 = mg.get(1, 1) - mf.get(1, 1);

  EstimateReport rep;
  rep.method = "moment-ref";
  auto& dg = rep.diagnostics;
  dg["m00_reference"] = m00;
  dg["m00_blurred"] = mg.get(0, 0);
  dg["delta_m20"] = d20;
  dg["delta_m02"] = d02;
  dg["delta_m11"] = d11;
  dg["warnings"] = nlohmann::json::array();
  if (reference.rows % 2 != blurred.rows % 2 || reference.cols % 2 != blurred.cols % 2) {
    dg["warnings"].push_back("frame centres differ by half a pixel");
  }

  if (d20 + d02 < -1e-9 * m00) {
    throw Error(ErrorKind::inconsistent_frames,
                "second-moment spread decreased: images do not share a frame", dg);
  }
  const double tol = 1e-9 * std::max({std::abs(mf.get(2, 0)), std::abs(mf.get(0, 2)), m00});
  if (d20 < -tol) dg["warnings"].push_back("negative m20 difference clamped to 0");
  if (d02 < -tol) dg["warnings"].push_back("negative m02 difference clamped to 0");
  const double c20 = std::max(d20, 0.0);
  const double c02 = std::max(d02, 0.0);

  const double L = 2.0 * std::sqrt(3.0) * std::sqrt((c20 + c02) / m00);
  rep.length_px = L;
  if (L < 2.0) {
    rep.blur_detected = false;
    dg["warnings"].push_back("no blur detected");
    return rep;
  }
  const double under = 1e-9 * (c20 + c02);
  double theta;
  if (c20 <= under) {
    theta = 90.0;
  } else if (c02 <= under) {
    theta = 0.0;
  } else {
    theta = std::atan(std::sqrt(c02 / c20)) * rad2deg;
    if (d11 < 0.0) theta = 180.0 - theta;
  }
  rep.theta_deg = wrap_angle_180(theta);
  return rep;
}

BlurInvariantSet blur_invariants(const Image& img, int max_order) {
  const MomentSet m = geometric_moments(img, max_order);
  const double m00 = m.get(0, 0);
  if (m00 == 0.0) throw Error(ErrorKind::division, "null image: m00 = 0");
  BlurInvariantSet inv(max_order);
  for (int n = 0; n <= max_order; ++n) {
    for (int p = n; p >= 0; --p) {
      const int q = n - p;
      long double s = 0.0L;
      for (int k = 0; k <= p; ++k) {
        for (int l = 0; l <= q; ++l) {
          const int kl = k + l;
          if (kl == 0 || kl >= n || kl % 2 != 0) continue;
          s += static_cast<long double>(binom(p, k) * binom(q, l)) * inv.get(p - k, q - l) * m.get(k, l);
        }
      }
      inv.set(p, q, m.get(p, q) - static_cast<double>(s / m00));
    }
  }
  return inv;
}

namespace {

struct RatioProbe {
  const Spectrum& F;
  const Spectrum& G;
  double fmax;

  double operator()(int u, int v) const {
    const cplx f = F.at_uv(u, v);
    const double den = std::norm(f);
    if (!(std::sqrt(den) > 1e-12 * fmax)) {
      throw Error(ErrorKind::invalid_argument, "reference spectrum vanishes at probe bin",
                  {{"u", u}, {"v", v}});
    }
    return (G.at_uv(u, v) * std::conj(f)).real() / den;
  }
};

double clamp_ratio(double r, const char* name, nlohmann::json& dg) {
  constexpr double slack = 0.02;
  if (r > 1.0 + slack || r < -slack) {
    dg["branch_violation"] = name;
    throw Error(ErrorKind::branch, std::string("spectral ratio outside principal branch at ") + name, dg);
  }
  if (r > 1.0 || r < 0.0) {
    dg["clamps"].push_back({{"bin", name}, {"raw", r}});
    return std::clamp(r, 0.0, 1.0);
  }
  return r;
}

}  // namespace

EstimateReport estimate_params_freq(const Image& reference, const Image& blurred) {
  if (!reference.same_shape(blurred)) {
    throw Error(ErrorKind::dimension, "reference and blurred images differ in size",
                {{"reference", {reference.rows, reference.cols}},
                 {"blurred", {blurred.rows, blurred.cols}}});
  }
  const Spectrum F = dft2(reference);
  const Spectrum G = dft2(blurred);
  double fmax = 0.0;
  for (const auto& b : F.bins) fmax = std::max(fmax, std::abs(b));
  const RatioProbe ratio{F, G, fmax};

  EstimateReport rep;
  rep.method = "freq-ref";
  auto& dg = rep.diagnostics;
  dg["clamps"] = nlohmann::json::array();
  const double r01 = ratio(0, 1);
  const double r10 = ratio(1, 0);
  dg["ratio_01"] = r01;
  dg["ratio_10"] = r10;
  const double a = asinc(clamp_ratio(r01, "(0,1)", dg));
  const double b = asinc(clamp_ratio(r10, "(1,0)", dg));
  dg["a"] = a;
  dg["b"] = b;

  if (a < 1e-6 && b < 1e-6) {
    rep.blur_detected = false;
    rep.length_px = 0.0;
    return rep;
  }
  const double rows = reference.rows, cols = reference.cols;
  double theta = std::atan2(a * rows, b * cols) * rad2deg;
  if (a >= 1e-6 && b >= 1e-6) {
    const double r11 = ratio(1, 1);
    const double r1m = ratio(1, -1);
    dg["ratio_11"] = r11;
    dg["ratio_1m1"] = r1m;
    if (r11 > r1m) theta = 180.0 - theta;
  }
  rep.theta_deg = wrap_angle_180(theta);
  rep.length_px = std::hypot(a * rows, b * cols);
  dg["b_signed"] = rep.theta_deg > 90.0 ? -b : b;
  return rep;
}

std::vector<FreqInvariantSample> xi_samples(const Image& reference, const Image& blurred,
                                            const std::vector<std::pair<int, int>>& bins) {
  const EstimateReport fit = estimate_params_freq(reference, blurred);
  double a = 0.0, bs = 0.0;
  if (fit.blur_detected) {
    a = fit.diagnostics.at("a").get<double>();
    bs = fit.diagnostics.at("b_signed").get<double>();
  }
  const Spectrum F = dft2(reference);
  const Spectrum G = dft2(blurred);
  double fmax = 0.0;
  for (const auto& b : F.bins) fmax = std::max(fmax, std::abs(b));

  std::vector<FreqInvariantSample> out;
  out.reserve(bins.size());
  for (const auto& [u, v] : bins) {
    FreqInvariantSample s;
    s.u = u;
    s.v = v;
    const cplx f = F.at_uv(u, v);
    s.f_magnitude = std::abs(f);
    s.predicted = sinc(bs * u + a * v);
    s.well_conditioned = s.f_magnitude > 1e-3 * fmax;
    if (!(s.f_magnitude > 1e-12 * fmax)) {
      s.skipped = true;
      s.xi = cplx(std::nan(""), std::nan(""));
      s.residual = std::nan("");
    } else {
      s.xi = G.at_uv(u, v) / f;
      s.residual = std::abs(s.xi - s.predicted);
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace mbinv
