"""Spectral weights of the regularization operator.

Both choices are diagonal in the Fourier basis shared with the BCCB
surrogate ``C``:

* ``h(CC*)`` with ``h(x) = (1 - x / max|u|^2)**j + 1e-15``;
* ``Lambda Lambda*`` for the periodic 5-point Laplacian.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .spectral import laplacian_symbol

__all__ = [
    "RegKind",
    "RegWeights",
    "DegenerateOperatorError",
    "h_weights",
    "lambda_weights",
    "H_FLOOR",
]

H_FLOOR = 1e-15


class RegKind(str, enum.Enum):
    HFUNCTION = "h"
    LAMBDA = "lambda"


class DegenerateOperatorError(ValueError):
    pass


@dataclass(frozen=True)
class RegWeights:
    """Nonnegative weights ``w[i, j]`` with bounds ``c1 <= w <= c2``."""

    w: np.ndarray
    c1: float
    c2: float
    kind: RegKind

    def __post_init__(self):
        w = np.asarray(self.w, dtype=np.float64)
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("regularization weights must be finite and >= 0")
        if self.kind is RegKind.HFUNCTION and not self.c1 > 0:
            raise ValueError("h-function weights need c1 > 0")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    @property
    def m(self) -> int:
        return self.w.shape[0]

    @property
    def c(self) -> float:
        """Ratio ``c1 / c2``."""
        return self.c1 / self.c2

    def normalized(self) -> "RegWeights":
        """Weights rescaled so that ``max w = 1`` (bounds scaled alike).

        The parameter equation is not invariant under rescaling of ``w``;
        its solvability argument assumes ``||Reg|| = 1``.
        """
        top = float(self.w.max())
        if top == 0:
            raise DegenerateOperatorError("all-zero regularization weights")
        return RegWeights(self.w / top, self.c1 / top, self.c2 / top, self.kind)


def h_weights(u, exponent: int = 4) -> RegWeights:
    """``h(|u|^2)`` for ``h(x) = (1 - x / s_max)**exponent + 1e-15``.

    ``s_max = max |u|^2`` stands in for ``||A||^2``.
    """
    u = np.asarray(u)
    top = max(np.abs(u.real).max(), np.abs(u.imag).max())
    if top == 0:
        raise DegenerateOperatorError("all-zero eigenvalues: h is undefined")
    # h depends on s / s_max only; an exact power-of-two rescale keeps s from
    # underflowing or overflowing without changing the rounding
    u = np.ldexp(u.real, -np.frexp(top)[1]) + 1j * np.ldexp(u.imag, -np.frexp(top)[1])
    s = u.real**2 + u.imag**2
    s_max = s.max()
    w = (1.0 - s / s_max) ** exponent + H_FLOOR
    return RegWeights(w, H_FLOOR, 1.0 + H_FLOOR, RegKind.HFUNCTION)


def lambda_weights(m: int) -> RegWeights:
    """``|sigma|^2`` of the periodic Laplacian; constants form its kernel."""
    return RegWeights(laplacian_symbol(m), 0.0, 64.0, RegKind.LAMBDA)
