#include "mbinv/image.hpp"

#include <algorithm>
#include <cmath>

#include "mbinv/error.hpp"

namespace mbinv {

Image::Image(int r, int c, double fill, double range)
    : rows(r), cols(c), range_hint(range) {
  if (r <= 0 || c <= 0) {
    throw Error(ErrorKind::invalid_argument, "image dimensions must be positive",
                {{"rows", r}, {"cols", c}});
  }
  px.assign(static_cast<std::size_t>(r) * c, fill);
}

Image::Image(int r, int c, std::vector<double> pixels, double range)
    : rows(r), cols(c), px(std::move(pixels)), range_hint(range) {
  validate(*this);
}

void validate(const Image& img) {
  if (img.rows <= 0 || img.cols <= 0) {
    throw Error(ErrorKind::invalid_argument, "image dimensions must be positive",
                {{"rows", img.rows}, {"cols", img.cols}});
  }
  if (img.px.size() != static_cast<std::size_t>(img.rows) * img.cols) {
    throw Error(ErrorKind::invalid_argument, "pixel count does not match rows*cols",
                {{"rows", img.rows}, {"cols", img.cols}, {"pixels", img.px.size()}});
  }
  for (std::size_t i = 0; i < img.px.size(); ++i) {
    if (!std::isfinite(img.px[i])) {
      throw Error(ErrorKind::invalid_argument, "non-finite pixel value", {{"index", i}});
    }
  }
  if (!(img.range_hint > 0.0) || !std::isfinite(img.range_hint)) {
    throw Error(ErrorKind::invalid_argument, "range_hint must be positive and finite");
  }
}

Image normalize(const Image& img) {
  if (img.empty()) throw Error(ErrorKind::invalid_argument, "normalize of empty image");
  Image out = img;
  out.range_hint = 1.0;
  auto [lo_it, hi_it] = std::minmax_element(img.px.begin(), img.px.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) {
    std::fill(out.px.begin(), out.px.end(), 0.0);
    return out;
  }
  const double span = hi - lo;
  for (auto& v : out.px) v = (v - lo) / span;
  return out;
}

}  // namespace mbinv
