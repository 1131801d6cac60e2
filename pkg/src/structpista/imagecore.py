"""Image and PSF containers, PGM / PSF-text I/O and seeded noise."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "Psf",
    "NoiseSpec",
    "FormatError",
    "DimensionError",
    "RNG_NAME",
    "as_image",
    "read_pgm",
    "write_pgm",
    "read_psf_text",
    "write_psf_text",
    "load_psf",
    "add_noise",
]

#: Bit generator used by :func:`add_noise`; recorded in experiment metadata.
RNG_NAME = "numpy.random.PCG64"


class FormatError(ValueError):
    """Malformed image or PSF file."""


class DimensionError(ValueError):
    """Array shapes incompatible with the requested operation."""


def as_image(data, copy: bool = False) -> np.ndarray:
    """Validate ``data`` as a square, finite, float64 image."""
    img = np.array(data, dtype=np.float64, copy=copy)
    if img.ndim != 2 or img.shape[0] != img.shape[1]:
        raise DimensionError(f"expected a square 2-D image, got shape {img.shape}")
    if not np.all(np.isfinite(img)):
        raise ValueError("image contains non-finite values")
    return img


@dataclass(frozen=True)
class Psf:
    """Point spread function: a ``k x k`` mask and the index of its center.

    The center is the pixel of the mask that sits on top of the output pixel
    when the blur is applied.
    """

    mask: np.ndarray
    center: tuple[int, int] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        mask = np.array(self.mask, dtype=np.float64)
        if mask.ndim != 2 or mask.shape[0] != mask.shape[1]:
            raise DimensionError(f"PSF mask must be square, got {mask.shape}")
        if not np.all(np.isfinite(mask)):
            raise ValueError("PSF mask contains non-finite values")
        k = mask.shape[0]
        center = self.center
        if center is None:
            center = (k // 2, k // 2)
        center = (int(center[0]), int(center[1]))
        if not (0 <= center[0] < k and 0 <= center[1] < k):
            raise DimensionError(f"PSF center {center} outside a {k}x{k} mask")
        mask.setflags(write=False)
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "center", center)

    @property
    def size(self) -> int:
        return self.mask.shape[0]

    def normalized(self) -> "Psf":
        """Return a copy scaled to unit mass."""
        total = self.mask.sum()
        if total <= 0:
            raise ValueError("PSF mass must be positive to normalize")
        return Psf(self.mask / total, self.center)

    @classmethod
    def delta(cls, k: int = 1, value: float = 1.0) -> "Psf":
        mask = np.zeros((k, k))
        mask[k // 2, k // 2] = value
        return cls(mask, (k // 2, k // 2))


@dataclass(frozen=True)
class NoiseSpec:
    """White Gaussian noise scaled to ``percent`` % of the clean data norm."""

    percent: float
    seed: int

    def __post_init__(self):
        if self.percent < 0:
            raise ValueError("noise percent must be non-negative")
        if self.seed < 0 or self.seed >= 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


def add_noise(g, spec: NoiseSpec) -> tuple[np.ndarray, float]:
    """Add noise of exact norm ``percent/100 * ||g||`` to ``g``.

    Returns the noisy image and the noise norm ``delta``.
    """
    g = as_image(g)
    if spec.percent == 0:
        return g.copy(), 0.0
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    w = rng.standard_normal(g.shape)
    delta = spec.percent / 100.0 * np.linalg.norm(g)
    eta = delta * w / np.linalg.norm(w)
    return g + eta, float(delta)


# -- PGM ---------------------------------------------------------------------

_TOKEN = re.compile(rb"(?:#[^\n]*\n|\s)*([^\s#]+)")


def _header_tokens(buf: bytes, count: int) -> tuple[list[bytes], int]:
    tokens = []
    pos = 0
    for _ in range(count):
        match = _TOKEN.match(buf, pos)
        if match is None:
            raise FormatError("truncated PGM header")
        tokens.append(match.group(1))
        pos = match.end()
    return tokens, pos


def read_pgm(path) -> np.ndarray:
    """Read a P2 or P5 PGM file into a square image scaled to [0, 1]."""
    buf = Path(path).read_bytes()
    try:
        (magic, w, h, maxval), pos = _header_tokens(buf, 4)
        width, height, maxval = int(w), int(h), int(maxval)
    except ValueError as exc:
        raise FormatError(f"malformed PGM header in {path}") from exc
    if magic not in (b"P2", b"P5"):
        raise FormatError(f"unsupported magic number {magic!r}")
    if not 0 < maxval < 65536 or width <= 0 or height <= 0:
        raise FormatError("invalid PGM dimensions or maxval")
    if width != height:
        raise DimensionError(f"non-square PGM image {width}x{height}")
    n = width * height
    if magic == b"P5":
        # exactly one whitespace byte separates header and raster
        raster = buf[pos + 1:]
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        if len(raster) < n * dtype.itemsize:
            raise FormatError("truncated P5 raster")
        values = np.frombuffer(raster, dtype=dtype, count=n)
    else:
        try:
            values = np.array(buf[pos:].split()[:n], dtype=np.int64)
        except ValueError as exc:
            raise FormatError("non-integer sample in P2 raster") from exc
        if values.size < n:
            raise FormatError("truncated P2 raster")
    if np.any(values > maxval):
        raise FormatError("sample exceeds declared maxval")
    return values.reshape(height, width).astype(np.float64) / maxval


def write_pgm(img, path) -> None:
    """Write ``img`` as an 8-bit binary (P5) PGM, clamping to [0, 1]."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2:
        raise DimensionError("write_pgm expects a 2-D array")
    data = np.rint(np.clip(img, 0.0, 1.0) * 255.0).astype(np.uint8)
    header = f"P5\n{img.shape[1]} {img.shape[0]}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(data.tobytes())


# -- PSF text format ---------------------------------------------------------
# first line "k k cr cc", then k rows of k reals


def read_psf_text(path) -> Psf:
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty PSF file")
    try:
        k1, k2, cr, cc = (int(t) for t in lines[0].split())
        rows = [[float(t) for t in ln.split()] for ln in lines[1:]]
    except ValueError as exc:
        raise FormatError(f"malformed PSF file {path}") from exc
    if k1 != k2:
        raise DimensionError("PSF must be square")
    mask = np.array(rows, dtype=np.float64)
    if mask.shape != (k1, k1):
        raise FormatError(f"expected {k1}x{k1} PSF values, got {mask.shape}")
    return Psf(mask, (cr, cc))


def write_psf_text(psf: Psf, path) -> None:
    k = psf.size
    with open(path, "w") as fh:
        fh.write(f"{k} {k} {psf.center[0]} {psf.center[1]}\n")
        for row in psf.mask:
            fh.write(" ".join(repr(float(v)) for v in row) + "\n")


def load_psf(path) -> Psf:
    """Load a PSF from the text format or from a PGM (centered, unit mass)."""
    path = Path(path)
    if path.suffix.lower() == ".pgm":
        return Psf(read_pgm(path)).normalized()
    return read_psf_text(path)
