#include "mbinv/blind.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "filters.hpp"
#include "mbinv/error.hpp"
#include "mbinv/psf.hpp"
#include "mbinv/spectral.hpp"

namespace mbinv {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double rad2deg = 180.0 / kPi;

void require_size(const Image& img, const char* who) {
  validate(img);
  if (img.rows < 64 || img.cols < 64) {
    throw Error(ErrorKind::invalid_argument, std::string(who) + " needs an image of at least 64x64",
                {{"rows", img.rows}, {"cols", img.cols}});
  }
}

std::vector<double> hann(int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * (i + 0.5) / n);
  return w;
}

// wraps an angle difference into [-90, 90)
double wrap_diff(double d) {
  double m = std::fmod(d + 90.0, 180.0);
  if (m < 0) m += 180.0;
  return m - 90.0;
}

struct Point {
  double r, c;
};

// Angle (degrees, y-up, [0,180)) of the normal of the best TLS line through pts.
double tls_normal_angle(const std::vector<Point>& pts) {
  double mr = 0.0, mc = 0.0;
  for (const auto& p : pts) { mr += p.r; mc += p.c; }
  mr /= pts.size();
  mc /= pts.size();
  double srr = 0.0, scc = 0.0, src = 0.0;
  for (const auto& p : pts) {
    const double dr = p.r - mr, dc = p.c - mc;
    srr += dr * dr;
    scc += dc * dc;
    src += dr * dc;
  }
  // principal direction of the scatter, (row, col)
  const double psi = 0.5 * std::atan2(2.0 * src, srr - scc);
  const double dr = std::cos(psi), dc = std::sin(psi);
  const double nr = dc, nc = -dr;
  return wrap_angle_180(std::atan2(-nr, nc) * rad2deg);
}

// local minimum prominence in the scipy sense
double prominence(const std::vector<double>& p, std::size_t k) {
  const double v = p[k];
  double lm = v;
  for (std::size_t i = k; i-- > 0;) {
    if (p[i] < v) break;
    lm = std::max(lm, p[i]);
  }
  double rm = v;
  for (std::size_t j = k + 1; j < p.size(); ++j) {
    if (p[j] < v) break;
    rm = std::max(rm, p[j]);
  }
  return std::min(lm, rm) - v;
}

double quad_offset(double l, double m, double r) {
  const double d = l - 2.0 * m + r;
  return d > 0.0 ? 0.5 * (l - r) / d : 0.0;
}

}  // namespace

Image blind_spectrum(const Image& img, bool gradient) {
  validate(img);
  const int R = img.rows, C = img.cols;
  const auto wr = hann(R), wc = hann(C);
  Image mag(R, C);
  if (gradient) {
    Image gx(R, C), gy(R, C);
    for (int r = 0; r < R; ++r) {
      for (int c = 0; c < C; ++c) {
        const double w = wr[r] * wc[c];
        gx(r, c) = 0.5 * (img(r, (c + 1) % C) - img(r, (c + C - 1) % C)) * w;
        gy(r, c) = 0.5 * (img((r + R - 1) % R, c) - img((r + 1) % R, c)) * w;
      }
    }
    const Spectrum X = dft2(gx), Y = dft2(gy);
    for (std::size_t i = 0; i < mag.px.size(); ++i)
      mag.px[i] = std::log1p(std::sqrt(std::norm(X.bins[i]) + std::norm(Y.bins[i])));
  } else {
    double mean = 0.0;
    for (double v : img.px) mean += v;
    mean /= img.px.size();
    Image x(R, C);
    for (int r = 0; r < R; ++r)
      for (int c = 0; c < C; ++c) x(r, c) = (img(r, c) - mean) * wr[r] * wc[c];
    const Spectrum X = dft2(x);
    for (std::size_t i = 0; i < mag.px.size(); ++i) mag.px[i] = std::log1p(std::abs(X.bins[i]));
  }
  return fftshift(mag);
}

AngleEstimate estimate_angle_spectrum(const Image& blurred, const BlindConfig& cfg) {
  require_size(blurred, "estimate_angle_spectrum");
  if (cfg.segment_length < 2) throw Error(ErrorKind::invalid_argument, "segment_length must be >= 2");
  if (!(cfg.segment_overlap >= 0.0 && cfg.segment_overlap < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "segment_overlap must be in [0,1)");
  }
  const Image S = blind_spectrum(blurred, cfg.gradient);
  const int R = S.rows, C = S.cols, mn = std::min(R, C);
  const double cr = R / 2, cc = C / 2;
  const double rad = mn / 2 - 2;

  AngleEstimate out;
  auto& dg = out.diagnostics;

  // coarse direction and coherence from the structure tensor
  const Image Ss = detail::gaussian_blur(S, 1.5);
  const Image sx = detail::sobel_x(Ss), sy = detail::sobel_y(Ss);
  double jxx = 0.0, jyy = 0.0, jxy = 0.0;
  std::vector<std::size_t> disk;
  for (int r = 0; r < R; ++r) {
    for (int c = 0; c < C; ++c) {
      const double d2 = (r - cr) * (r - cr) + (c - cc) * (c - cc);
      if (d2 > rad * rad) continue;
      const std::size_t i = static_cast<std::size_t>(r) * C + c;
      disk.push_back(i);
      if (d2 < 9.0) continue;
      jxx += sx.px[i] * sx.px[i];
      jyy += sy.px[i] * sy.px[i];
      jxy += sx.px[i] * sy.px[i];
    }
  }
  const double coherence = (jxx + jyy) > 0.0 ? std::hypot(jxx - jyy, 2.0 * jxy) / (jxx + jyy) : 0.0;
  double phi = 0.5 * std::atan2(2.0 * jxy, jxx - jyy);  // row-down frame
  dg["coherence"] = coherence;
  dg["coarse_theta_deg"] = wrap_angle_180(-phi * rad2deg);
  if (coherence < cfg.min_coherence) {
    throw Error(ErrorKind::low_confidence, "no coherent spectral stripes", dg);
  }

  const Image S1 = detail::gaussian_blur(S, cfg.spectrum_sigma);
  const int smax = static_cast<int>(mn * 0.35);
  std::vector<double> rs;
  for (double r = 1.0; r < mn / 2 - 2; r += 0.5) rs.push_back(r);
  const int seg = cfg.segment_length;
  const int step = std::max(1, static_cast<int>(std::lround(seg * (1.0 - cfg.segment_overlap))));

  double est = wrap_angle_180(-phi * rad2deg);
  std::vector<double> seg_angles;
  nlohmann::json iters = nlohmann::json::array();
  int edge_points = 0;
  for (int it = 0; it < cfg.refine_iterations; ++it) {
    const double nr = std::sin(phi), nc = std::cos(phi);  // stripe normal (row, col)
    const double tr = nc, tc = -nr;                        // along the stripe

    Image So(R, C);
    const int hw = cfg.stripe_half_window;
    for (int r = 0; r < R; ++r)
      for (int c = 0; c < C; ++c) {
        double acc = 0.0;
        for (int k = -hw; k <= hw; ++k) acc += detail::sample_clamped(S1, r + k * tr, c + k * tc);
        So(r, c) = acc / (2 * hw + 1);
      }
    const Image gxo = detail::gradient_x(So), gyo = detail::gradient_y(So);
    Image gm(R, C);
    for (std::size_t i = 0; i < gm.px.size(); ++i) gm.px[i] = std::hypot(gxo.px[i], gyo.px[i]);
    std::vector<double> disk_vals;
    disk_vals.reserve(disk.size());
    for (std::size_t i : disk) disk_vals.push_back(gm.px[i]);
    const double thr = detail::percentile(disk_vals, cfg.edge_percentile);

    seg_angles.clear();
    edge_points = 0;
    for (int side : {1, -1}) {
      std::vector<std::optional<Point>> pts;
      for (int s = -smax; s <= smax; ++s) {
        if (std::abs(s) < 3) { pts.emplace_back(); continue; }
        std::vector<double> prof, gmp;
        for (double r : rs) {
          const double pr = cr + s * tr + side * r * nr;
          const double pc = cc + s * tc + side * r * nc;
          const double v = detail::sample_or_nan(So, pr, pc);
          if (std::isnan(v)) break;
          prof.push_back(v);
          gmp.push_back(detail::sample_or_nan(gm, pr, pc));
        }
        if (prof.size() < 5) { pts.emplace_back(); continue; }
        const std::size_t n = prof.size();
        std::vector<double> drop(n);
        drop[0] = -(prof[1] - prof[0]) / 0.5;
        drop[n - 1] = -(prof[n - 1] - prof[n - 2]) / 0.5;
        for (std::size_t j = 1; j + 1 < n; ++j) drop[j] = -0.5 * (prof[j + 1] - prof[j - 1]) / 0.5;
        std::size_t k = 1;
        for (std::size_t j = 2; j + 1 < n; ++j)
          if (drop[j] > drop[k]) k = j;
        if (!(gmp[k] >= thr)) { pts.emplace_back(); continue; }
        std::optional<std::size_t> jmin;
        for (std::size_t m = k + 1; m + 1 < n; ++m) {
          if (prof[m] <= prof[m - 1] && prof[m] < prof[m + 1]) { jmin = m; break; }
        }
        if (!jmin) { pts.emplace_back(); continue; }
        const std::size_t j = *jmin;
        const double r = rs[j] + 0.5 * quad_offset(prof[j - 1], prof[j], prof[j + 1]);
        pts.push_back(Point{cr + s * tr + side * r * nr, cc + s * tc + side * r * nc});
        ++edge_points;
      }
      for (int st = 0; st + seg <= static_cast<int>(pts.size()); st += step) {
        std::vector<Point> segpts;
        for (int i = st; i < st + seg; ++i)
          if (pts[i]) segpts.push_back(*pts[i]);
        if (static_cast<int>(segpts.size()) < seg / 2) continue;
        seg_angles.push_back(tls_normal_angle(segpts));
      }
    }
    if (seg_angles.size() < 3) {
      dg["valid_segments"] = seg_angles.size();
      dg["edge_points"] = edge_points;
      throw Error(ErrorKind::low_confidence, "fewer than 3 valid stripe-edge segments", dg);
    }
    const double cur = wrap_angle_180(-phi * rad2deg);
    std::vector<double> rel;
    rel.reserve(seg_angles.size());
    for (double a : seg_angles) rel.push_back(wrap_diff(a - cur));
    est = wrap_angle_180(cur + detail::median(rel));
    phi = -est / rad2deg;
    iters.push_back({{"theta_deg", est}, {"segments", seg_angles.size()}, {"edge_points", edge_points},
                     {"threshold", thr}});
  }
  dg["iterations"] = iters;
  dg["segment_angles_deg"] = seg_angles;
  dg["valid_segments"] = seg_angles.size();
  dg["fused_theta_deg"] = est;
  out.theta_deg = est;
  return out;
}

LengthEstimate estimate_length_spectrum(const Image& blurred, double theta_deg, const BlindConfig& cfg) {
  require_size(blurred, "estimate_length_spectrum");
  if (cfg.profile_band_divisor < 1) throw Error(ErrorKind::invalid_argument, "profile_band_divisor must be >= 1");
  const Image S = blind_spectrum(blurred, cfg.gradient);
  const int R = S.rows, C = S.cols, mn = std::min(R, C);
  const double cr = R / 2, cc = C / 2;
  double c, s;
  exact_cos_sin(theta_deg, c, s);
  const double nr = -s, nc = c;   // motion direction, row-down frame
  const double tr = nc, tc = -nr; // perpendicular

  const int band = mn / cfg.profile_band_divisor;
  // stop where the averaging band would leave the spectrum: clamped corner
  // samples bend the tail upward and fake prominent minima
  int half = mn / 2 - 1;
  auto inside = [&](int k) {
    for (int sg : {1, -1})
      for (int o : {-band, band}) {
        const double pr = cr + sg * k * nr + o * tr, pc = cc + sg * k * nc + o * tc;
        if (pr < 0.0 || pc < 0.0 || pr > R - 1 || pc > C - 1) return false;
      }
    return true;
  };
  while (half > 4 && !inside(half)) --half;
  std::vector<double> prof(half + 1, 0.0);
  for (int k = 0; k <= half; ++k) {
    double acc = 0.0;
    for (int o = -band; o <= band; ++o)
      for (int sg : {1, -1})
        acc += detail::sample_clamped(S, cr + sg * k * nr + o * tr, cc + sg * k * nc + o * tc);
    prof[k] = acc;
  }

  LengthEstimate out;
  auto& dg = out.diagnostics;
  std::vector<std::size_t> cand;
  for (std::size_t k = 2; k + 1 < prof.size(); ++k)
    if (prof[k] < prof[k - 1] && prof[k] <= prof[k + 1]) cand.push_back(k);
  if (cand.empty()) throw Error(ErrorKind::low_confidence, "no spectral minima along the motion direction", dg);

  std::vector<double> prom(cand.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    prom[i] = prominence(prof, cand[i]);
    if (prom[i] > prom[best]) best = i;
  }
  const double pmax = prom[best];
  std::vector<double> chain;
  for (std::size_t i = best; i < cand.size(); ++i) {
    if (prom[i] < cfg.prominence_fraction * pmax) continue;
    const std::size_t k = cand[i];
    chain.push_back(k + quad_offset(prof[k - 1], prof[k], prof[k + 1]));
  }
  std::vector<double> spacing;
  double prev = 0.0;
  for (double r : chain) { spacing.push_back(r - prev); prev = r; }
  const double D = detail::median(spacing);
  std::vector<double> dev;
  for (double sp : spacing) dev.push_back(std::abs(sp - D));
  const double dispersion = detail::median(dev) / D;
  const double meff = 1.0 / (c * c / C + s * s / R);

  dg["minima_bins"] = chain;
  dg["spacings_bins"] = spacing;
  dg["spacing_bins"] = D;
  dg["spacing_dispersion"] = dispersion;
  dg["max_prominence"] = pmax;
  dg["profile_length_bins"] = meff;
  if (R != C) dg["non_square"] = true;
  if (!(D >= 2.0)) {
    throw Error(ErrorKind::low_confidence, "first spectral zero unresolved (blur longer than the band allows)", dg);
  }
  if (chain.size() < 2) {
    throw Error(ErrorKind::low_confidence, "a single spectral minimum does not define a zero spacing", dg);
  }
  // every spacing must be a whole multiple of the typical one; shallow zeros
  // may be skipped, including those before the first registered minimum
  const std::vector<double> tail(spacing.begin() + 1, spacing.end());
  const double dt = detail::median(tail);
  auto off_grid = [&](double sp) {
    const double m = std::max(1.0, std::round(sp / dt));
    return std::abs(sp - m * dt) / dt;
  };
  double worst = 0.0;
  for (double sp : spacing) worst = std::max(worst, off_grid(sp));
  dg["max_spacing_deviation"] = worst;
  if (dispersion > cfg.max_spacing_dispersion || worst > cfg.max_spacing_deviation) {
    throw Error(ErrorKind::low_confidence, "spectral minima are not periodic", dg);
  }
  out.spacing_bins = D;
  out.length_px = meff / D;
  return out;
}

EstimateReport estimate_blind(const Image& blurred, const BlindConfig& cfg) {
  const AngleEstimate a = estimate_angle_spectrum(blurred, cfg);
  const LengthEstimate l = estimate_length_spectrum(blurred, a.theta_deg, cfg);
  EstimateReport rep;
  rep.method = "spectral-blind";
  rep.theta_deg = a.theta_deg;
  rep.length_px = l.length_px;
  rep.diagnostics["angle"] = a.diagnostics;
  rep.diagnostics["length"] = l.diagnostics;
  rep.diagnostics["stripe_spacing_bins"] = l.spacing_bins;
  rep.diagnostics["gradient_preprocessing"] = cfg.gradient;
  return rep;
}

EstimateReport estimate_cepstrum(const Image& blurred) {
  require_size(blurred, "estimate_cepstrum");
  const Image cep = cepstrum2(blurred);
  const int R = cep.rows, C = cep.cols;
  const int cr = R / 2, cc = C / 2;
  double best = 0.0;
  int br = -1, bc = -1;
  double sum = 0.0, sum2 = 0.0;
  std::size_t n = 0;
  for (int r = 0; r < R; ++r) {
    for (int c = 0; c < C; ++c) {
      const int dr = r - cr, dc = c - cc;
      if (dr * dr + dc * dc <= 9) continue;
      const double v = cep(r, c);
      sum += v;
      sum2 += v * v;
      ++n;
      if (br < 0 || v < best) { best = v; br = r; bc = c; }
    }
  }
  const double mean = sum / n;
  const double sigma = std::sqrt(std::max(0.0, sum2 / n - mean * mean));
  EstimateReport rep;
  rep.method = "cepstrum";
  auto& dg = rep.diagnostics;
  dg["peak_row_offset"] = br - cr;
  dg["peak_col_offset"] = bc - cc;
  dg["peak_value"] = best;
  dg["sigma"] = sigma;
  if (!(best < -3.0 * sigma)) {
    throw Error(ErrorKind::low_confidence, "no negative cepstral peak below -3 sigma", dg);
  }
  const double dr = br - cr, dc = bc - cc;
  rep.theta_deg = wrap_angle_180(std::atan2(-dr, dc) * rad2deg);
  rep.length_px = std::hypot(dr, dc);
  return rep;
}

}  // namespace mbinv
