#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "mbinv/error.hpp"
#include "mbinv/image.hpp"

namespace mbinv {

namespace {

bool is_ws(unsigned char ch) {
  return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == '\v' || ch == '\f';
}

class Reader {
 public:
  explicit Reader(const std::string& b) : b_(b) {}

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return b_.size() - pos_; }
  bool at_end() const { return pos_ >= b_.size(); }
  unsigned char peek() const { return static_cast<unsigned char>(b_[pos_]); }
  unsigned char get() { return static_cast<unsigned char>(b_[pos_++]); }

  void skip_ws_and_comments() {
    while (!at_end()) {
      const unsigned char ch = peek();
      if (is_ws(ch)) {
        ++pos_;
      } else if (ch == '#') {
        while (!at_end() && peek() != '\n' && peek() != '\r') ++pos_;
      } else {
        break;
      }
    }
  }

  // Returns false at end of input, throws on a non-digit token.
  bool next_uint(unsigned long& out, const char* what) {
    skip_ws_and_comments();
    if (at_end()) return false;
    const std::size_t start = pos_;
    unsigned long v = 0;
    while (!at_end() && std::isdigit(peek())) {
      v = v * 10 + (get() - '0');
      if (v > 0xFFFFFFFFul) {
        throw Error(ErrorKind::parse, std::string("numeric overflow in ") + what,
                    {{"offset", start}});
      }
    }
    if (pos_ == start || (!at_end() && !is_ws(peek()) && peek() != '#')) {
      throw Error(ErrorKind::parse, std::string("expected unsigned integer for ") + what,
                  {{"offset", pos_}});
    }
    out = v;
    return true;
  }

 private:
  const std::string& b_;
  std::size_t pos_ = 0;
};

unsigned long header_field(Reader& rd, const char* what) {
  unsigned long v = 0;
  if (!rd.next_uint(v, what)) {
    throw Error(ErrorKind::parse, std::string("header ends before ") + what,
                {{"offset", rd.pos()}});
  }
  return v;
}

}  // namespace

Image decode_pgm(const std::string& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2')) {
    throw Error(ErrorKind::parse, "not a PGM file (magic must be P5 or P2)", {{"offset", 0}});
  }
  const bool binary = bytes[1] == '5';
  Reader rd(bytes);
  rd.get();
  rd.get();
  if (!rd.at_end() && !is_ws(rd.peek()) && rd.peek() != '#') {
    throw Error(ErrorKind::parse, "missing whitespace after magic", {{"offset", rd.pos()}});
  }
  const std::size_t width_at = rd.pos();
  const unsigned long width = header_field(rd, "width");
  const unsigned long height = header_field(rd, "height");
  const std::size_t maxval_at = rd.pos();
  const unsigned long maxval = header_field(rd, "maxval");
  if (width == 0 || height == 0 || width > (1ul << 20) || height > (1ul << 20)) {
    throw Error(ErrorKind::parse, "invalid image dimensions",
                {{"offset", width_at}, {"width", width}, {"height", height}});
  }
  if (maxval == 0 || maxval > 65535) {
    throw Error(ErrorKind::parse, "maxval must be in 1..65535",
                {{"offset", maxval_at}, {"maxval", maxval}});
  }

  const std::size_t n = static_cast<std::size_t>(width) * height;
  std::vector<double> px(n);
  const double scale = 1.0 / static_cast<double>(maxval);

  if (binary) {
    if (rd.at_end() || !is_ws(rd.peek())) {
      throw Error(ErrorKind::parse, "expected single whitespace before raster",
                  {{"offset", rd.pos()}});
    }
    rd.get();
    const std::size_t bpp = maxval > 255 ? 2 : 1;
    const std::size_t need = n * bpp;
    if (rd.remaining() < need) {
      throw Error(ErrorKind::size, "truncated raster",
                  {{"offset", rd.pos()}, {"expected_bytes", need}, {"available_bytes", rd.remaining()}});
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t at = rd.pos();
      unsigned long v = rd.get();
      if (bpp == 2) v = (v << 8) | rd.get();
      if (v > maxval) {
        throw Error(ErrorKind::parse, "sample exceeds maxval", {{"offset", at}, {"value", v}});
      }
      px[i] = static_cast<double>(v) * scale;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      unsigned long v = 0;
      const std::size_t at = rd.pos();
      if (!rd.next_uint(v, "sample")) {
        throw Error(ErrorKind::size, "truncated raster",
                    {{"offset", at}, {"expected_samples", n}, {"available_samples", i}});
      }
      if (v > maxval) {
        throw Error(ErrorKind::parse, "sample exceeds maxval", {{"offset", at}, {"value", v}});
      }
      px[i] = static_cast<double>(v) * scale;
    }
  }
  return Image(static_cast<int>(height), static_cast<int>(width), std::move(px), 1.0);
}

std::string encode_pgm(const Image& img, int maxval) {
  if (maxval != 255 && maxval != 65535) {
    throw Error(ErrorKind::invalid_argument, "maxval must be 255 or 65535", {{"maxval", maxval}});
  }
  validate(img);
  std::ostringstream head;
  head << "P5\n" << img.cols << ' ' << img.rows << '\n' << maxval << '\n';
  std::string out = head.str();
  const std::size_t bpp = maxval > 255 ? 2 : 1;
  out.reserve(out.size() + img.size() * bpp);
  for (double v : img.px) {
    const double c = std::clamp(v, 0.0, 1.0);
    const auto q = static_cast<unsigned long>(std::floor(c * maxval + 0.5));
    if (bpp == 2) out.push_back(static_cast<char>((q >> 8) & 0xFF));
    out.push_back(static_cast<char>(q & 0xFF));
  }
  return out;
}

Image load_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open image for reading", {{"path", path}});
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorKind::io, "read failure", {{"path", path}});
  return decode_pgm(bytes);
}

void save_image(const Image& img, const std::string& path, int maxval) {
  const std::string bytes = encode_pgm(img, maxval);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot open image for writing", {{"path", path}});
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::io, "write failure", {{"path", path}});
}

}  // namespace mbinv
