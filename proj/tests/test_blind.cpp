#include "test_util.hpp"

using namespace mbinv;
using testutil::check_error_kind;

namespace {

Image blur_circ(const Image& f, double t, double L) {
  return degrade(f, MotionParams::make(t, L), {}, Boundary::circular, Extent::same);
}

// Centre crop of a zero-boundary blur of a larger scene.
Image cropped_blur(int n, double t, double L, std::uint64_t seed) {
  const int pad = static_cast<int>(L);
  const int big = n + 2 * pad;
  const Image g = degrade(phantom(big, big, seed), MotionParams::make(t, L), {}, Boundary::zero, Extent::same);
  Image out(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out(r, c) = g(r + pad, c + pad);
  return out;
}

}  // namespace

TEST_SUITE("blind") {

TEST_CASE("angle of a horizontal blur") {
  const Image g = blur_circ(phantom(256, 256, 1), 0, 16);
  const AngleEstimate a = estimate_angle_spectrum(g);
  CHECK(testutil::angle_diff(a.theta_deg, 0) <= 3.0);
}

TEST_CASE("angle of an oblique blur over several scenes") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const Image g = blur_circ(phantom(256, 256, seed), 45, 40);
    const double t = estimate_angle_spectrum(g).theta_deg;
    CHECK(t >= 42.0);
    CHECK(t <= 48.0);
  }
}

TEST_CASE("length from the zero spacing") {
  const Image f = phantom(256, 256, 1);
  const LengthEstimate a = estimate_length_spectrum(blur_circ(f, 0, 16), 0);
  CHECK(a.length_px >= 14.5);
  CHECK(a.length_px <= 17.5);
  const LengthEstimate b = estimate_length_spectrum(blur_circ(f, 90, 8), 90);
  CHECK(b.length_px >= 7.0);
  CHECK(b.length_px <= 9.0);
}

TEST_CASE("doubling the length halves the zero spacing") {
  const Image f = phantom(256, 256, 2);
  for (double t : {0.0, 30.0}) {
    const double d1 = estimate_length_spectrum(blur_circ(f, t, 10), t).spacing_bins;
    const double d2 = estimate_length_spectrum(blur_circ(f, t, 20), t).spacing_bins;
    CHECK(d1 / d2 == doctest::Approx(2.0).epsilon(0.15));
  }
}

TEST_CASE("full blind estimate and determinism") {
  const Image g = blur_circ(phantom(256, 256, 3), 60, 16);
  const EstimateReport a = estimate_blind(g), b = estimate_blind(g);
  CHECK(a.method == "spectral-blind");
  CHECK(a.blur_detected);
  CHECK(testutil::angle_diff(a.theta_deg, 60) <= 3.0);
  CHECK(std::abs(a.length_px - 16) <= 0.15 * 16);
  CHECK(a.theta_deg == b.theta_deg);
  CHECK(a.length_px == b.length_px);
  CHECK(a.diagnostics.dump() == b.diagnostics.dump());
}

TEST_CASE("unblurred noise has no reliable direction") {
  const Image n = random_image(128, 128, 4);
  check_error_kind([&] { estimate_angle_spectrum(n); }, ErrorKind::low_confidence);
}

TEST_CASE("blurs much longer than the crop are rejected") {
  for (std::uint64_t seed : {1, 2})
    for (double L : {100.0, 200.0})
      for (double t : {0.0, 30.0, 45.0, 60.0, 90.0}) {
        CAPTURE(seed);
        CAPTURE(L);
        CAPTURE(t);
        check_error_kind([&] { estimate_length_spectrum(cropped_blur(64, t, L, seed), t); },
                         ErrorKind::low_confidence);
      }
}

TEST_CASE("cepstrum estimate of a horizontal blur") {
  const EstimateReport r = estimate_cepstrum(blur_circ(phantom(256, 256, 1), 0, 16));
  CHECK(r.method == "cepstrum");
  CHECK(r.theta_deg >= 0.0);
  CHECK(r.theta_deg < 180.0);
  CHECK(testutil::angle_diff(r.theta_deg, 0) <= 3.0);
  CHECK(r.length_px >= 14.0);
  CHECK(r.length_px <= 18.0);
}

TEST_CASE("small images are refused") {
  const Image s = random_image(63, 128, 5);
  check_error_kind([&] { estimate_blind(s); }, ErrorKind::invalid_argument);
  check_error_kind([&] { estimate_cepstrum(s); }, ErrorKind::invalid_argument);
  check_error_kind([&] { estimate_angle_spectrum(s); }, ErrorKind::invalid_argument);
  check_error_kind([&] { estimate_length_spectrum(s, 0); }, ErrorKind::invalid_argument);
}

}  // TEST_SUITE
