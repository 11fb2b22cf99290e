#include "mbinv/quality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mbinv/error.hpp"

namespace mbinv {

namespace {

void check_pair(const Image& a, const Image& b) {
  validate(a);
  validate(b);
  if (!a.same_shape(b)) {
    throw Error(ErrorKind::dimension, "images differ in size",
                {{"test", {a.rows, a.cols}}, {"reference", {b.rows, b.cols}}});
  }
  if (a.range_hint != b.range_hint) {
    throw Error(ErrorKind::dimension, "images differ in range_hint",
                {{"test", a.range_hint}, {"reference", b.range_hint}});
  }
}

// valid-mode separable filtering
std::vector<double> filter_valid(const std::vector<double>& x, int rows, int cols,
                                 const std::vector<double>& w, int& out_rows, int& out_cols) {
  const int k = static_cast<int>(w.size());
  out_rows = rows - k + 1;
  out_cols = cols - k + 1;
  std::vector<double> tmp(static_cast<std::size_t>(rows) * out_cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < out_cols; ++c) {
      double s = 0.0;
      for (int j = 0; j < k; ++j) s += w[j] * x[static_cast<std::size_t>(r) * cols + c + j];
      tmp[static_cast<std::size_t>(r) * out_cols + c] = s;
    }
  std::vector<double> out(static_cast<std::size_t>(out_rows) * out_cols);
  for (int r = 0; r < out_rows; ++r)
    for (int c = 0; c < out_cols; ++c) {
      double s = 0.0;
      for (int j = 0; j < k; ++j) s += w[j] * tmp[static_cast<std::size_t>(r + j) * out_cols + c];
      out[static_cast<std::size_t>(r) * out_cols + c] = s;
    }
  return out;
}

}  // namespace

double ssim(const Image& test, const Image& reference) {
  check_pair(test, reference);
  int k = 11;
  const int smallest = std::min(test.rows, test.cols);
  if (smallest < k) k = smallest % 2 == 1 ? smallest : smallest - 1;
  const int h = k / 2;
  std::vector<double> w(k);
  double tot = 0.0;
  for (int i = -h; i <= h; ++i) {
    w[i + h] = std::exp(-0.5 * i * i / (1.5 * 1.5));
    tot += w[i + h];
  }
  for (double& v : w) v /= tot;

  const double R = reference.range_hint;
  const double C1 = (0.01 * R) * (0.01 * R), C2 = (0.03 * R) * (0.03 * R);
  const int rows = test.rows, cols = test.cols;
  const std::size_t n = test.px.size();
  std::vector<double> xx(n), yy(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    xx[i] = test.px[i] * test.px[i];
    yy[i] = reference.px[i] * reference.px[i];
    xy[i] = test.px[i] * reference.px[i];
  }
  int orr = 0, occ = 0;
  const auto mx = filter_valid(test.px, rows, cols, w, orr, occ);
  const auto my = filter_valid(reference.px, rows, cols, w, orr, occ);
  const auto exx = filter_valid(xx, rows, cols, w, orr, occ);
  const auto eyy = filter_valid(yy, rows, cols, w, orr, occ);
  const auto exy = filter_valid(xy, rows, cols, w, orr, occ);

  long double acc = 0.0L;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double ux = mx[i], uy = my[i];
    const double sxx = exx[i] - ux * ux;
    const double syy = eyy[i] - uy * uy;
    const double sxy = exy[i] - ux * uy;
    const double num = (2.0 * ux * uy + C1) * (2.0 * sxy + C2);
    const double den = (ux * ux + uy * uy + C1) * (sxx + syy + C2);
    acc += num / den;
  }
  return static_cast<double>(acc / mx.size());
}

double psnr(const Image& test, const Image& reference) {
  check_pair(test, reference);
  long double se = 0.0L;
  for (std::size_t i = 0; i < test.px.size(); ++i) {
    const long double d = test.px[i] - reference.px[i];
    se += d * d;
  }
  if (se == 0.0L) return std::numeric_limits<double>::infinity();
  const double mse = static_cast<double>(se / test.px.size());
  const double R = reference.range_hint;
  return 10.0 * std::log10(R * R / mse);
}

}  // namespace mbinv
