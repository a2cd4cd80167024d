"""Image deblurring with a two-level non-stationary tight framelet regularizer.

Images are float64 arrays of shape (height, width) with intensities in [0, 1].
"""

from ._core import (
    DivergenceError,
    ImageIoError,
    analysis,
    degrade,
    make_synthetic,
    psnr,
    read_image,
    restore,
    ssim,
    verify_tffb,
    write_image,
)

__all__ = [
    "DivergenceError",
    "ImageIoError",
    "analysis",
    "degrade",
    "make_synthetic",
    "psnr",
    "read_image",
    "restore",
    "ssim",
    "verify_tffb",
    "write_image",
]
