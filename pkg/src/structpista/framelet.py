"""Single-level linear B-spline tight frame with reflective boundaries.

Frame coefficients of an ``m x m`` image are stored as an array of shape
``(3, 3, m, m)``; entry ``[i, j]`` is the subband ``W_i X W_j^T``, with
``[0, 0]`` the low-pass band.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.signal import fftconvolve

from .boundary import BlurOperator

__all__ = [
    "filter_matrices",
    "analysis",
    "synthesis",
    "frame_norm_bound",
    "DENSE_BOUND_MAX_M",
]

DENSE_BOUND_MAX_M = 32

_SQRT2_4 = np.sqrt(2.0) / 4.0


@lru_cache(maxsize=16)
def filter_matrices(m: int) -> np.ndarray:
    """The three ``m x m`` filter matrices ``W_0, W_1, W_2`` stacked.

    Interior rows carry the masks ``[1, 2, 1] / 4``,
    ``sqrt(2)/4 [-1, 0, 1]`` and ``[-1, 2, -1] / 4``; the first and last
    rows fold the mask back onto the image (``x[-1] = x[0]``), which
    is what makes ``sum_i W_i^T W_i = I``.
    """
    if m < 2:
        raise ValueError("framelet transform needs m >= 2")
    W = np.zeros((3, m, m))
    masks = (
        np.array([1.0, 2.0, 1.0]) / 4.0,
        np.array([-1.0, 0.0, 1.0]) * _SQRT2_4,
        np.array([-1.0, 2.0, -1.0]) / 4.0,
    )
    for f, mask in enumerate(masks):
        for i in range(m):
            for offset, coeff in zip((-1, 0, 1), mask):
                j = i + offset
                # reflect the out-of-range tap onto the boundary sample
                j = min(max(j, 0), m - 1)
                W[f, i, j] += coeff
    W.setflags(write=False)
    return W


def analysis(img) -> np.ndarray:
    """Frame coefficients ``W f`` of a square image, shape ``(3, 3, m, m)``."""
    img = np.asarray(img, dtype=np.float64)
    W = filter_matrices(img.shape[0])
    left = W @ img  # (3, m, m): W_i X
    return np.einsum("iab,jcb->ijac", left, W)


def synthesis(coeffs) -> np.ndarray:
    """Adjoint of :func:`analysis`; ``synthesis(analysis(f)) == f``."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    W = filter_matrices(coeffs.shape[-1])
    right = np.einsum("ijac,jcd->iad", coeffs, W)  # sum_j C_ij W_j
    return np.einsum("iba,ibd->ad", W, right)


def _synthesis_abs_row_sums(m: int) -> np.ndarray:
    # row p of W* has absolute sum sum_ij (|W_i|^T 1)_p1 (|W_j|^T 1)_p2
    col = np.abs(filter_matrices(m)).sum(axis=1).sum(axis=0)
    return np.outer(col, col)


def frame_norm_bound(op: BlurOperator) -> float:
    """Upper bound on ``sup_{||x||_inf = 1} ||B x||_2`` for ``B = K W*``.

    For ``m <= 32`` the bound is the 2-norm of the row-wise absolute sums of
    the dense ``m^2 x 9 m^2`` matrix. Larger problems use the majorant
    ``|K| |W*| 1``, obtained by applying the blur with absolute PSF entries
    and absolute padding coefficients to the absolute row sums of ``W*``.
    """
    m = op.m
    if not np.any(op.psf.mask):
        return 0.0
    if m <= DENSE_BOUND_MAX_M:
        K = op.dense_assemble()
        W = filter_matrices(m)
        Wt = np.einsum("iab,jcd->ijacbd", W, W).reshape(9 * m * m, m * m)
        B = K @ Wt.T
        return float(np.linalg.norm(np.abs(B).sum(axis=1)))
    ws = _synthesis_abs_row_sums(m)
    rows = np.abs(op._pad_rows) @ ws @ np.abs(op._pad_cols).T
    bound = fftconvolve(rows, np.abs(op.psf.mask), mode="valid")
    return float(np.linalg.norm(np.maximum(bound, 0.0)))
