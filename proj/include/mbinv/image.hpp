#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mbinv {

// Row-major real image. Pixel (r, c) lives at px[r * cols + c].
struct Image {
  int rows = 0;
  int cols = 0;
  std::vector<double> px;
  double range_hint = 1.0;

  Image() = default;
  Image(int rows, int cols, double fill = 0.0, double range_hint = 1.0);
  // Validates dimensions and finiteness.
  Image(int rows, int cols, std::vector<double> pixels, double range_hint = 1.0);

  double& operator()(int r, int c) { return px[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return px[static_cast<std::size_t>(r) * cols + c]; }

  std::size_t size() const { return px.size(); }
  bool empty() const { return px.empty(); }
  bool same_shape(const Image& o) const { return rows == o.rows && cols == o.cols; }
};

// Throws ErrorKind::invalid_argument on bad dimensions or non-finite pixels.
void validate(const Image& img);

// Centre-origin, y-up frame: x = c - origin_col, y = origin_row - r.
struct CenteredGrid {
  double origin_row = 0.0;
  double origin_col = 0.0;

  CenteredGrid(int rows, int cols)
      : origin_row((rows - 1) / 2.0), origin_col((cols - 1) / 2.0) {}
  explicit CenteredGrid(const Image& img) : CenteredGrid(img.rows, img.cols) {}

  double x(int c) const { return c - origin_col; }
  double y(int r) const { return origin_row - r; }
};

// Affine rescale to [0,1]; constant images map to zeros.
Image normalize(const Image& img);

// PGM I/O (P5 binary and P2 ASCII in, P5 out).
Image load_image(const std::string& path);
void save_image(const Image& img, const std::string& path, int maxval = 255);

Image decode_pgm(const std::string& bytes);
std::string encode_pgm(const Image& img, int maxval = 255);

}  // namespace mbinv
