#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "doctest.h"
#include "mbinv/mbinv.hpp"

namespace testutil {

using mbinv::cplx;
using mbinv::Image;

inline double angle_diff(double a, double b) { return std::abs(std::remainder(a - b, 180.0)); }

inline double max_abs_diff(const Image& a, const Image& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.px.size(); ++i) m = std::max(m, std::abs(a.px[i] - b.px[i]));
  return m;
}

// Runs f and checks that it throws mbinv::Error of the given kind.
template <class F>
void check_error_kind(F&& f, mbinv::ErrorKind kind) {
  bool thrown = false;
  try {
    f();
  } catch (const mbinv::Error& e) {
    thrown = true;
    CHECK_MESSAGE(e.kind() == kind, "got kind " << mbinv::to_string(e.kind()) << ": " << e.what());
  }
  CHECK_MESSAGE(thrown, "expected error kind " << mbinv::to_string(kind));
}

// Plain O(N^4) DFT with storage indices.
inline std::vector<cplx> direct_dft(const Image& f) {
  const int R = f.rows, C = f.cols;
  std::vector<cplx> out(static_cast<std::size_t>(R) * C);
  for (int kr = 0; kr < R; ++kr)
    for (int kc = 0; kc < C; ++kc) {
      cplx acc = 0.0;
      for (int r = 0; r < R; ++r)
        for (int c = 0; c < C; ++c) {
          const double ph = -2.0 * std::numbers::pi * (static_cast<double>(kr) * r / R + static_cast<double>(kc) * c / C);
          acc += f(r, c) * cplx(std::cos(ph), std::sin(ph));
        }
      out[static_cast<std::size_t>(kr) * C + kc] = acc;
    }
  return out;
}

// Silences library warnings for the lifetime of the object and counts them.
struct WarningCapture {
  std::vector<std::string> messages;
  WarningCapture() {
    mbinv::set_warning_sink([this](const std::string& m) { messages.push_back(m); });
  }
  ~WarningCapture() { mbinv::set_warning_sink(nullptr); }
};

}  // namespace testutil
