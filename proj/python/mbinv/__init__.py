"""Motion-blur estimation and restoration (Python bindings)."""

from ._core import (
    MbinvError,
    __version__,
    add_noise,
    blur_invariants,
    cepstrum,
    convolve,
    degrade,
    dft2,
    estimate_blind,
    estimate_cepstrum,
    estimate_freq,
    estimate_moments,
    geometric_moments,
    idft2,
    impulse,
    inverse_filter,
    load_image,
    log_magnitude,
    phantom,
    psf_kernel,
    psf_moment,
    psf_transfer,
    psnr,
    random_image,
    save_image,
    ssim,
    wiener_deblur,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
