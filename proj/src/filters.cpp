#include "filters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mbinv/error.hpp"

namespace mbinv::detail {

namespace {

// d c b a | a b c d | d c b a
inline int reflect(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n;
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

Image correlate_rows(const Image& img, const std::vector<double>& w) {
  const int h = static_cast<int>(w.size()) / 2;
  Image out(img.rows, img.cols, 0.0, img.range_hint);
  for (int r = 0; r < img.rows; ++r)
    for (int c = 0; c < img.cols; ++c) {
      double s = 0.0;
      for (int k = -h; k <= h; ++k) s += w[k + h] * img(r, reflect(c + k, img.cols));
      out(r, c) = s;
    }
  return out;
}

Image correlate_cols(const Image& img, const std::vector<double>& w) {
  const int h = static_cast<int>(w.size()) / 2;
  Image out(img.rows, img.cols, 0.0, img.range_hint);
  for (int r = 0; r < img.rows; ++r)
    for (int c = 0; c < img.cols; ++c) {
      double s = 0.0;
      for (int k = -h; k <= h; ++k) s += w[k + h] * img(reflect(r + k, img.rows), c);
      out(r, c) = s;
    }
  return out;
}

}  // namespace

Image gaussian_blur(const Image& img, double sigma) {
  if (!(sigma > 0.0)) return img;
  const int radius = static_cast<int>(4.0 * sigma + 0.5);
  std::vector<double> w(2 * radius + 1);
  double total = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    w[k + radius] = std::exp(-0.5 * k * k / (sigma * sigma));
    total += w[k + radius];
  }
  for (double& x : w) x /= total;
  return correlate_cols(correlate_rows(img, w), w);
}

Image sobel_x(const Image& img) {
  return correlate_cols(correlate_rows(img, {-1.0, 0.0, 1.0}), {1.0, 2.0, 1.0});
}

Image sobel_y(const Image& img) {
  return correlate_rows(correlate_cols(img, {-1.0, 0.0, 1.0}), {1.0, 2.0, 1.0});
}

Image gradient_x(const Image& img) {
  Image out(img.rows, img.cols, 0.0, img.range_hint);
  for (int r = 0; r < img.rows; ++r) {
    for (int c = 0; c < img.cols; ++c) {
      if (img.cols == 1) out(r, c) = 0.0;
      else if (c == 0) out(r, c) = img(r, 1) - img(r, 0);
      else if (c == img.cols - 1) out(r, c) = img(r, c) - img(r, c - 1);
      else out(r, c) = 0.5 * (img(r, c + 1) - img(r, c - 1));
    }
  }
  return out;
}

Image gradient_y(const Image& img) {
  Image out(img.rows, img.cols, 0.0, img.range_hint);
  for (int r = 0; r < img.rows; ++r) {
    for (int c = 0; c < img.cols; ++c) {
      if (img.rows == 1) out(r, c) = 0.0;
      else if (r == 0) out(r, c) = img(1, c) - img(0, c);
      else if (r == img.rows - 1) out(r, c) = img(r, c) - img(r - 1, c);
      else out(r, c) = 0.5 * (img(r + 1, c) - img(r - 1, c));
    }
  }
  return out;
}

namespace {
double bilinear(const Image& img, double r, double c) {
  const int r0 = std::min(static_cast<int>(std::floor(r)), img.rows - 1);
  const int c0 = std::min(static_cast<int>(std::floor(c)), img.cols - 1);
  const int r1 = std::min(r0 + 1, img.rows - 1);
  const int c1 = std::min(c0 + 1, img.cols - 1);
  const double fr = r - r0, fc = c - c0;
  return (1.0 - fr) * ((1.0 - fc) * img(r0, c0) + fc * img(r0, c1)) +
         fr * ((1.0 - fc) * img(r1, c0) + fc * img(r1, c1));
}
}  // namespace

double sample_clamped(const Image& img, double r, double c) {
  r = std::clamp(r, 0.0, static_cast<double>(img.rows - 1));
  c = std::clamp(c, 0.0, static_cast<double>(img.cols - 1));
  return bilinear(img, r, c);
}

double sample_or_nan(const Image& img, double r, double c) {
  if (!(r >= 0.0 && c >= 0.0 && r <= img.rows - 1 && c <= img.cols - 1)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return bilinear(img, r, c);
}

double percentile(std::vector<double> values, double pct) {
  if (values.empty()) throw Error(ErrorKind::invalid_argument, "percentile of empty set");
  std::sort(values.begin(), values.end());
  const double pos = pct / 100.0 * (values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double f = pos - lo;
  return values[lo] + f * (values[hi] - values[lo]);
}

double median(std::vector<double> values) { return percentile(std::move(values), 50.0); }

}  // namespace mbinv::detail
