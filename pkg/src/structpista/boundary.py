"""Matrix-free blur operators under Zero, Periodic, Reflective and
Anti-Reflective boundary conditions.

Every operator is realised as ``K = Crop o FullConv o Pad``: the image is
extended by the boundary rule, convolved with the PSF by FFT and the valid
``m x m`` part is kept. Padding is linear and separable, so it is stored as
one small padding matrix per axis, ``pad(X) = P_r X P_c^T``; the adjoint
then is ``K^T Y = P_r^T corr(Y) P_c`` where ``corr`` is correlation with the
PSF (its 180 degree rotation convolved in "full" mode).
"""

from __future__ import annotations

import enum
from functools import cached_property

import numpy as np
from scipy.signal import fftconvolve

from .imagecore import DimensionError, Psf

__all__ = [
    "BoundaryCondition",
    "BlurOperator",
    "pad",
    "pad_matrix",
    "DENSE_MAX_M",
]

DENSE_MAX_M = 64


class BoundaryCondition(str, enum.Enum):
    ZERO = "zero"
    PERIODIC = "periodic"
    REFLECTIVE = "reflective"
    ANTIREFLECTIVE = "antireflective"

    @classmethod
    def parse(cls, value) -> "BoundaryCondition":
        if isinstance(value, cls):
            return value
        key = str(value).lower().replace("-", "").replace("_", "")
        aliases = {"reflexive": "reflective", "dirichlet": "zero", "ar": "antireflective"}
        return cls(aliases.get(key, key))


_NP_MODE = {
    BoundaryCondition.ZERO: dict(mode="constant"),
    BoundaryCondition.PERIODIC: dict(mode="wrap"),
    # mirror that repeats the edge sample: f_0 = f_1, f_-1 = f_2, ...
    BoundaryCondition.REFLECTIVE: dict(mode="symmetric"),
    # f_0 = 2 f_1 - f_2, f_-1 = 2 f_1 - f_3, ...
    BoundaryCondition.ANTIREFLECTIVE: dict(mode="reflect", reflect_type="odd"),
}


def _check_margins(m: int, bc: BoundaryCondition, *margins: int) -> None:
    if min(margins) < 0:
        raise DimensionError("pad margins must be non-negative")
    if bc in (BoundaryCondition.REFLECTIVE, BoundaryCondition.ANTIREFLECTIVE):
        if max(margins) > m - 1:
            raise DimensionError(
                f"{bc.value} padding needs margins <= m - 1 = {m - 1}, got {max(margins)}"
            )


def pad_matrix(m: int, bc, before: int, after: int) -> np.ndarray:
    """1-D padding matrix of shape ``(before + m + after, m)``."""
    bc = BoundaryCondition.parse(bc)
    _check_margins(m, bc, before, after)
    return np.pad(np.eye(m), ((before, after), (0, 0)), **_NP_MODE[bc])


def pad(img, bc, top: int, bottom: int, left: int, right: int) -> np.ndarray:
    """Extend ``img`` outside its support according to ``bc``.

    Axis 0 is padded first, then axis 1, so corner ghosts of the
    Anti-Reflective rule are the composition of the two 1-D rules.
    """
    bc = BoundaryCondition.parse(bc)
    img = np.asarray(img, dtype=np.float64)
    if img.ndim == 1:
        _check_margins(img.shape[0], bc, left, right)
        return np.pad(img, (left, right), **_NP_MODE[bc])
    _check_margins(img.shape[0], bc, top, bottom)
    _check_margins(img.shape[1], bc, left, right)
    out = np.pad(img, ((top, bottom), (0, 0)), **_NP_MODE[bc])
    return np.pad(out, ((0, 0), (left, right)), **_NP_MODE[bc])


class BlurOperator:
    """The structured blur matrix ``M_m(kappa)`` for a PSF and a boundary rule.

    Parameters
    ----------
    psf : Psf
        Blur kernel; ``psf.size <= m``.
    bc : BoundaryCondition or str
        Boundary condition.
    m : int
        Image side.
    """

    def __init__(self, psf: Psf, bc, m: int):
        self.psf = psf
        self.bc = BoundaryCondition.parse(bc)
        self.m = int(m)
        k = psf.size
        if k > self.m:
            raise DimensionError(f"PSF of size {k} larger than the {m}x{m} image")
        cr, cc = psf.center
        # convolution reads f(i - a + cr) for a in [0, k): k-1-cr samples
        # before the pixel, cr after it
        self.margins = (k - 1 - cr, cr, k - 1 - cc, cc)
        _check_margins(self.m, self.bc, *self.margins)

    def __repr__(self):
        return f"BlurOperator(k={self.psf.size}, bc={self.bc.value}, m={self.m})"

    @cached_property
    def _pad_rows(self) -> np.ndarray:
        top, bottom, _, _ = self.margins
        return pad_matrix(self.m, self.bc, top, bottom)

    @cached_property
    def _pad_cols(self) -> np.ndarray:
        _, _, left, right = self.margins
        return pad_matrix(self.m, self.bc, left, right)

    def _check(self, img) -> np.ndarray:
        img = np.asarray(img, dtype=np.float64)
        if img.shape != (self.m, self.m):
            raise DimensionError(f"expected a {self.m}x{self.m} image, got {img.shape}")
        return img

    def apply(self, img) -> np.ndarray:
        img = self._check(img)
        padded = self._pad_rows @ img @ self._pad_cols.T
        return fftconvolve(padded, self.psf.mask, mode="valid")

    __call__ = apply

    def apply_adjoint(self, img) -> np.ndarray:
        img = self._check(img)
        full = fftconvolve(img, self.psf.mask[::-1, ::-1], mode="full")
        return self._pad_rows.T @ full @ self._pad_cols

    def dense_assemble(self) -> np.ndarray:
        """Dense ``m^2 x m^2`` matrix of the operator (row-major vectorization).

        Column ``j`` is ``apply(e_j)``. Only meant as a test oracle.
        """
        m = self.m
        if m > DENSE_MAX_M:
            raise DimensionError(f"dense assembly limited to m <= {DENSE_MAX_M}")
        cols = np.empty((m * m, m * m))
        basis = np.zeros((m, m))
        for j in range(m * m):
            basis.flat[j] = 1.0
            cols[:, j] = self.apply(basis).ravel()
            basis.flat[j] = 0.0
        return cols

