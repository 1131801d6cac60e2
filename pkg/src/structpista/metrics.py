"""Restoration quality: RRE, PSNR and SSIM."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import correlate

__all__ = ["MetricReport", "rre", "psnr", "ssim", "gaussian_window", "report"]

SSIM_WIN = 11
SSIM_SIGMA = 1.5
SSIM_K1, SSIM_K2 = 0.01, 0.03


@dataclass(frozen=True)
class MetricReport:
    rre: float
    psnr: float
    ssim: float


def _pair(f, f_true):
    f = np.asarray(f, dtype=np.float64)
    f_true = np.asarray(f_true, dtype=np.float64)
    if f.shape != f_true.shape:
        raise ValueError(f"shape mismatch {f.shape} vs {f_true.shape}")
    return f, f_true


def rre(f, f_true) -> float:
    """Relative restoration error ``||f - f_true|| / ||f_true||``."""
    f, f_true = _pair(f, f_true)
    ref = np.linalg.norm(f_true)
    if ref == 0:
        raise ZeroDivisionError("reference image has zero norm")
    return float(np.linalg.norm(f - f_true) / ref)


def psnr(f, f_true) -> float:
    """``20 log10(m M / ||f - f_true||)`` with ``m`` the image side and
    ``M = max(f_true)``; ``inf`` for a perfect match."""
    f, f_true = _pair(f, f_true)
    err = np.linalg.norm(f - f_true)
    if err == 0:
        return float("inf")
    return float(20.0 * np.log10(f_true.shape[0] * f_true.max() / err))


def gaussian_window(size: int = SSIM_WIN, sigma: float = SSIM_SIGMA) -> np.ndarray:
    ax = np.arange(size) - (size - 1) / 2.0
    g = np.exp(-(ax**2) / (2.0 * sigma**2))
    win = np.outer(g, g)
    return win / win.sum()


def ssim(f, f_true, data_range: float = 1.0) -> float:
    """Mean structural similarity over all fully-contained 11x11 windows.

    Gaussian weights with sigma 1.5, ``C1 = (0.01 L)^2``, ``C2 = (0.03 L)^2``.
    """
    x, y = _pair(f, f_true)
    if min(x.shape) < SSIM_WIN:
        raise ValueError(f"SSIM needs images of at least {SSIM_WIN}x{SSIM_WIN}")
    win = gaussian_window()

    def filt(a):
        return correlate(a, win, mode="valid", method="direct")

    c1 = (SSIM_K1 * data_range) ** 2
    c2 = (SSIM_K2 * data_range) ** 2
    mx, my = filt(x), filt(y)
    sxx = filt(x * x) - mx * mx
    syy = filt(y * y) - my * my
    sxy = filt(x * y) - mx * my
    num = (2 * mx * my + c1) * (2 * sxy + c2)
    den = (mx * mx + my * my + c1) * (sxx + syy + c2)
    return float(np.mean(num / den))


def report(f, f_true) -> MetricReport:
    return MetricReport(rre(f, f_true), psnr(f, f_true), ssim(f, f_true))
