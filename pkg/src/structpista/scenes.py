"""Synthetic test images and PSFs.

The scenes are deterministic given their arguments. ``cameraman`` needs
scikit-image's bundled sample data.
"""

from __future__ import annotations

import numpy as np

from .imagecore import Psf

__all__ = [
    "synthetic_scene",
    "satellite_scene",
    "cameraman",
    "motion_psf",
    "double_motion_psf",
    "gaussian_psf",
]


def _grid(m: int):
    ax = (np.arange(m) + 0.5) / m
    return np.meshgrid(ax, ax, indexing="ij")


def synthetic_scene(m: int, seed: int = 0) -> np.ndarray:
    """Piecewise-smooth scene with edges touching the image border."""
    rng = np.random.default_rng(seed)
    y, x = _grid(m)
    img = 0.35 + 0.25 * x - 0.15 * y + 0.08 * np.sin(7 * np.pi * x * y)
    img[(x - 0.3) ** 2 + (y - 0.35) ** 2 < 0.04] = 0.9
    img[(np.abs(x - 0.72) < 0.14) & (np.abs(y - 0.62) < 0.22)] = 0.15
    img[(y > 0.8) & (x < 0.5)] = 0.6
    img[np.abs(y - x + 0.1) < 0.02] = 1.0
    for _ in range(6):
        cx, cy, r = rng.random(), rng.random(), 0.03 + 0.05 * rng.random()
        img[(x - cx) ** 2 + (y - cy) ** 2 < r * r] = rng.random()
    return np.clip(img, 0.0, 1.0)


def satellite_scene(m: int) -> np.ndarray:
    """Bright satellite-like object on a black background."""
    y, x = _grid(m)
    img = np.zeros((m, m))
    body = (np.abs(x - 0.5) < 0.09) & (np.abs(y - 0.5) < 0.16)
    img[body] = 0.75
    img[(np.abs(x - 0.5) < 0.05) & (np.abs(y - 0.5) < 0.12)] = 1.0
    for side in (-1, 1):
        cx = 0.5 + side * 0.25
        panel = (np.abs(x - cx) < 0.14) & (np.abs(y - 0.47) < 0.06)
        img[panel] = 0.55
        ribs = panel & (np.mod(np.floor((x - cx) * m / 3), 2) == 0)
        img[ribs] = 0.4
        img[(np.abs(x - 0.5 - side * 0.1) < 0.02) & (np.abs(y - 0.47) < 0.01)] = 0.6
    img[(np.abs(x - 0.5) < 0.008) & (y > 0.22) & (y < 0.34)] = 0.9
    img[(x - 0.5) ** 2 + (y - 0.21) ** 2 < 0.0012] = 0.8
    img[(x - 0.5) ** 2 + (y - 0.7) ** 2 < 0.002] = 0.5
    return img


def cameraman(m: int = 256) -> np.ndarray:
    """The cameraman photograph, block-averaged to ``m x m`` (``m`` divides 512)."""
    from skimage import data

    img = data.camera().astype(np.float64) / 255.0
    f = img.shape[0] // m
    if f * m != img.shape[0]:
        raise ValueError("m must divide 512")
    return img.reshape(m, f, m, f).mean(axis=(1, 3))


def _segment_mask(k: int, angle_deg: float, length: float, ramp: float, oversample: int = 16):
    theta = np.deg2rad(angle_deg)
    ts = np.linspace(-0.5, 0.5, oversample * k)
    mask = np.zeros((k, k))
    c = (k - 1) / 2.0
    for t in ts:
        r = c - t * length * np.sin(theta)
        cc = c + t * length * np.cos(theta)
        i, j = int(round(r)), int(round(cc))
        if 0 <= i < k and 0 <= j < k:
            mask[i, j] += 1.0 + ramp * (t + 0.5)
    return mask


def motion_psf(k: int = 9, angle_deg: float = 30.0, ramp: float = 1.0) -> Psf:
    """Linear motion blur of length ``k`` with an intensity ramp along the
    path (so the kernel is not symmetric); unit mass, centered."""
    mask = _segment_mask(k, angle_deg, k - 1, ramp)
    mask += 0.02 * mask.max() * (mask == 0) * _disc(k)
    return Psf(mask / mask.sum(), (k // 2, k // 2))


def _disc(k: int) -> np.ndarray:
    c = (k - 1) / 2.0
    i, j = np.mgrid[:k, :k]
    return ((i - c) ** 2 + (j - c) ** 2 <= 1.0).astype(float)


def double_motion_psf(k: int = 9) -> Psf:
    """Superposition of two motion blurs along different directions."""
    mask = _segment_mask(k, 20.0, k - 1, 0.5) + 0.7 * _segment_mask(k, 110.0, (k - 1) * 0.6, -0.5)
    return Psf(mask / mask.sum(), (k // 2, k // 2))


def gaussian_psf(k: int, sigma: tuple[float, float] = (2.0, 2.0), rotation_deg: float = 0.0) -> Psf:
    """Anisotropic Gaussian (atmospheric-like) blur, unit mass, centered."""
    c = k // 2
    i, j = np.mgrid[:k, :k] - c
    th = np.deg2rad(rotation_deg)
    a = np.cos(th) * i + np.sin(th) * j
    b = -np.sin(th) * i + np.cos(th) * j
    mask = np.exp(-0.5 * ((a / sigma[0]) ** 2 + (b / sigma[1]) ** 2))
    return Psf(mask / mask.sum(), (c, c))
