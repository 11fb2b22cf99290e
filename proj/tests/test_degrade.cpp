#include "test_util.hpp"

using namespace mbinv;
using testutil::check_error_kind;

namespace {

// Independent linear convolution: out(R, C) = sum K(i, j) f(R - i + oi, C - j + oj).
Image brute_convolve(const Image& f, const Image& k, Boundary b, Extent e) {
  const int hr = k.rows / 2, hc = k.cols / 2;
  const int R = e == Extent::same ? f.rows : f.rows + k.rows - 1;
  const int C = e == Extent::same ? f.cols : f.cols + k.cols - 1;
  const int oi = e == Extent::same ? hr : 0, oj = e == Extent::same ? hc : 0;
  auto at = [&](int r, int c) -> double {
    if (r >= 0 && r < f.rows && c >= 0 && c < f.cols) return f(r, c);
    if (b == Boundary::zero) return 0.0;
    if (b == Boundary::replicate) return f(std::clamp(r, 0, f.rows - 1), std::clamp(c, 0, f.cols - 1));
    return f(((r % f.rows) + f.rows) % f.rows, ((c % f.cols) + f.cols) % f.cols);
  };
  Image out(R, C);
  for (int r = 0; r < R; ++r)
    for (int c = 0; c < C; ++c) {
      double acc = 0.0;
      for (int i = 0; i < k.rows; ++i)
        for (int j = 0; j < k.cols; ++j) acc += k(i, j) * at(r + oi - i, c + oj - j);
      out(r, c) = acc;
    }
  return out;
}

}  // namespace

TEST_SUITE("degrade") {

TEST_CASE("SplitMix64 reference outputs") {
  SplitMix64 g(0);
  CHECK(g.next() == 0xE220A8397B1DCDAFull);
  CHECK(g.next() == 0x6E789E6AA1B965F4ull);
  CHECK(g.next() == 0x06C45D188009454Full);
  SplitMix64 u(7);
  for (int i = 0; i < 1000; ++i) {
    const double a = u.uniform();
    CHECK((a >= 0.0 && a < 1.0));
    const double b = u.uniform_open0();
    CHECK((b > 0.0 && b <= 1.0));
  }
}

TEST_CASE("convolution matches the brute-force oracle for every mode") {
  const Image f = random_image(9, 11, 21);
  Image k(3, 5);
  SplitMix64 rng(5);
  for (double& v : k.px) v = rng.uniform() - 0.3;  // asymmetric, signed
  for (Boundary b : {Boundary::zero, Boundary::replicate, Boundary::circular})
    for (Extent e : {Extent::same, Extent::full}) {
      if (b == Boundary::circular && e == Extent::full) continue;
      const Image got = convolve(f, k, b, e);
      const Image want = brute_convolve(f, k, b, e);
      REQUIRE(got.same_shape(want));
      CHECK(testutil::max_abs_diff(got, want) < 1e-13);
    }
}

TEST_CASE("circular convolution equals the DFT product") {
  const Image f = random_image(32, 24, 2);
  const Psf p = psf_kernel(MotionParams::make(30, 9));
  const Image g = convolve(f, p, Boundary::circular, Extent::same);
  const Spectrum F = dft2(f), K = kernel_transfer(p.kernel, 32, 24);
  Spectrum G(32, 24);
  for (std::size_t i = 0; i < G.bins.size(); ++i) G.bins[i] = F.bins[i] * K.bins[i];
  testutil::WarningCapture wc;
  CHECK(testutil::max_abs_diff(g, idft2(G)) < 1e-12);
}

TEST_CASE("identity, constant preservation and mass conservation") {
  const Image f = random_image(16, 16, 3);
  CHECK(convolve(f, psf_kernel(MotionParams::make(33, 1)), Boundary::zero, Extent::same).px == f.px);
  const Image cst(20, 20, 0.7);
  const Image g = convolve(cst, psf_kernel(MotionParams::make(60, 11)), Boundary::replicate, Extent::same);
  for (double v : g.px) CHECK(v == doctest::Approx(0.7).epsilon(1e-14));
  double s0 = 0.0, s1 = 0.0;
  for (double v : f.px) s0 += v;
  for (double v : convolve(f, psf_kernel(MotionParams::make(20, 9)), Boundary::zero, Extent::full).px) s1 += v;
  CHECK(std::abs(s1 - s0) <= 1e-10 * s0);
}

TEST_CASE("impulse response of a horizontal L=16 blur") {
  // Even L: 15 interior taps of 1/16 and two end taps of 1/32.
  const Image g = degrade(impulse(33, 33), MotionParams::make(0, 16), {}, Boundary::zero, Extent::same);
  for (int r = 0; r < 33; ++r)
    for (int c = 0; c < 33; ++c) {
      double want = 0.0;
      if (r == 16 && std::abs(c - 16) < 8) want = 1.0 / 16;
      if (r == 16 && std::abs(c - 16) == 8) want = 1.0 / 32;
      CHECK(g(r, c) == doctest::Approx(want).epsilon(1e-14));
    }
}

TEST_CASE("convolution errors") {
  const Image f(8, 8, 0.5);
  check_error_kind([&] { convolve(f, psf_kernel(MotionParams::make(0, 12)), Boundary::zero, Extent::same); },
                   ErrorKind::size);
  check_error_kind([&] { convolve(f, Image(3, 3, 0.1), Boundary::circular, Extent::full); },
                   ErrorKind::invalid_argument);
  check_error_kind([&] { convolve(f, Image(2, 3, 0.1), Boundary::zero, Extent::same); },
                   ErrorKind::invalid_argument);
  check_error_kind([] { parse_boundary("mirror"); }, ErrorKind::invalid_argument);
  check_error_kind([] { parse_extent("valid"); }, ErrorKind::invalid_argument);
  CHECK(parse_boundary("replicate") == Boundary::replicate);
  CHECK(std::string(to_string(Extent::full)) == "full");
}

TEST_CASE("noise") {
  const Image z(256, 256, 0.0);
  CHECK(add_noise(z, {0.0, 9}).px == z.px);
  const Image a = add_noise(z, {0.05, 1234}), b = add_noise(z, {0.05, 1234});
  CHECK(a.px == b.px);
  CHECK(add_noise(z, {0.05, 1235}).px != a.px);
  double m = 0.0, v = 0.0;
  for (double x : a.px) m += x;
  m /= a.size();
  for (double x : a.px) v += (x - m) * (x - m);
  const double sd = std::sqrt(v / (a.size() - 1));
  CHECK(sd >= 0.048);
  CHECK(sd <= 0.052);
  CHECK(std::abs(m) < 0.001);
  check_error_kind([&] { add_noise(z, {-1.0, 0}); }, ErrorKind::invalid_argument);
  // first sample follows the documented Box-Muller recipe
  SplitMix64 rng(1234);
  const double u1 = static_cast<double>((rng.next() >> 11) + 1) * 0x1.0p-53;
  const double u2 = static_cast<double>(rng.next() >> 11) * 0x1.0p-53;
  CHECK(a.px[0] == 0.05 * (std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2)));
}

TEST_CASE("degrade composes blur and noise deterministically") {
  const Image f = phantom(64, 64, 4);
  const MotionParams mp = MotionParams::make(45, 9);
  const Image a = degrade(f, mp, {0.01, 3}, Boundary::replicate, Extent::same);
  const Image b = add_noise(convolve(f, psf_kernel(mp), Boundary::replicate, Extent::same), {0.01, 3});
  CHECK(a.px == b.px);
  CHECK(degrade(f, MotionParams::make(10, 1), {}, Boundary::zero, Extent::same).px == f.px);
}

}  // TEST_SUITE
