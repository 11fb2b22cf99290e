#pragma once

#include <optional>
#include <string>

#include "mbinv/image.hpp"
#include "mbinv/psf.hpp"

namespace mbinv {

// Kernel: dft2 of the rasterized kernel (default). Analytic: psf_transfer.
enum class TransferModel { kernel, analytic };
TransferModel parse_transfer_model(const std::string& s);
const char* to_string(TransferModel t);

Spectrum blur_transfer(const MotionParams& params, int rows, int cols, TransferModel model);

struct WienerConfig {
  double nsr = 1e-3;
  // Full form: both present, same shape as the image, non-negative.
  std::optional<Image> signal_psd;
  std::optional<Image> noise_psd;
  TransferModel transfer = TransferModel::kernel;
};

// conj(H)/(|H|^2 + nsr) or conj(H) S/(|H|^2 S + N); circular model; output clamped at 0.
Image wiener_deblur(const Image& blurred, const MotionParams& params, const WienerConfig& cfg = {});

// G/H where |H| >= floor, 0 elsewhere.
Image inverse_filter(const Image& blurred, const MotionParams& params, double floor,
                     TransferModel transfer = TransferModel::kernel);

}  // namespace mbinv
