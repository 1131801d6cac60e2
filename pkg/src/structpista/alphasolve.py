"""Nonstationary Tikhonov parameter.

Finds ``alpha`` with ``alpha ||(CC* + alpha W)^{-1} r|| = t ||r||`` where
``CC*`` and ``W`` are diagonal in the Fourier basis. Writing
``s = |u|^2`` for the eigenvalues of ``CC*`` and ``rr = |r_hat|^2`` for the
unitary spectrum of the residual, the squared left-hand side is

    Phi(alpha) = sum (alpha / (s + alpha w))**2 * rr,

increasing in ``alpha`` from 0 to ``sum rr / w**2``. The root is found with
the Newton map written directly in ``alpha``,

    alpha <- alpha**2 Phi' / (alpha Phi' + Phi - T),    T = (t ||r||)**2,

which is Newton's method on the convex decreasing function
``gamma -> Phi(1/gamma)``. Started above the root (the initial guess is
pushed up by decades until ``Phi >= T``) the iterates decrease
monotonically to it. Bisection on ``[0, alpha_max]`` is the fallback.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "AlphaProblem",
    "AlphaSolution",
    "TargetUnattainable",
    "phi",
    "phi_prime",
    "solve_alpha",
    "solve_alpha_detailed",
    "bisect_alpha",
]

log = logging.getLogger(__name__)


class TargetUnattainable(ValueError):
    """``t ||r||`` is not below ``lim_{alpha -> inf} sqrt(Phi(alpha))``."""


@dataclass(frozen=True)
class AlphaProblem:
    """One instance of the parameter equation, in spectral form.

    Parameters
    ----------
    s : array
        Eigenvalues ``|u|^2`` of ``CC*``.
    w : array
        Regularization weights, same shape as ``s``.
    rr : array
        Squared moduli of the unitary DFT of the residual; ``rr.sum()``
        equals ``||r||^2``.
    t : float
        Target ratio.
    """

    s: np.ndarray
    w: np.ndarray
    rr: np.ndarray
    t: float
    alpha_max: float = 1e12
    max_newton: int = 50
    bisect_tol: float = 1e-10

    def __post_init__(self):
        for name in ("s", "w", "rr"):
            arr = np.asarray(getattr(self, name), dtype=np.float64).ravel()
            object.__setattr__(self, name, arr)
        if not (self.s.shape == self.w.shape == self.rr.shape):
            raise ValueError("s, w and rr must have the same shape")
        if self.t <= 0:
            raise ValueError("target ratio t must be positive")

    @classmethod
    def from_spectra(cls, u, w, rhat, t, **caps) -> "AlphaProblem":
        """Build from BCCB eigenvalues ``u`` and a unitary residual spectrum."""
        return cls(np.abs(u) ** 2, w, np.abs(rhat) ** 2, t, **caps)

    @property
    def rnorm(self) -> float:
        return float(np.sqrt(self.rr.sum()))

    @property
    def target(self) -> float:
        """``t ||r||``, the value ``sqrt(Phi)`` must reach."""
        return self.t * self.rnorm

    def limit(self) -> float:
        """``lim sqrt(Phi(alpha))`` as ``alpha -> inf``, i.e. ``||r_hat / w||``."""
        live = self.rr > 0
        if np.any(live & (self.w == 0)):
            return np.inf
        return float(np.sqrt(np.sum(self.rr[live] / self.w[live] ** 2)))


@dataclass
class AlphaSolution:
    alpha: float
    method: str  # "newton" or "bisection"
    iterates: list = field(default_factory=list)


def phi(alpha: float, p: AlphaProblem) -> float:
    """Squared left-hand side of the parameter equation."""
    if alpha == 0:
        return 0.0
    den = p.s + alpha * p.w
    live = p.rr > 0
    if np.any(den[live] == 0):
        return np.inf
    with np.errstate(over="ignore"):
        return float(np.sum((alpha / den[live]) ** 2 * p.rr[live]))


def phi_prime(alpha: float, p: AlphaProblem) -> float:
    """Derivative of :func:`phi`: ``sum 2 alpha s rr / (s + alpha w)**3``."""
    if alpha == 0:
        return 0.0
    den = p.s + alpha * p.w
    live = den > 0
    with np.errstate(over="ignore"):
        return float(np.sum(2.0 * alpha * p.s[live] * p.rr[live] / den[live] ** 3))


def _check(p: AlphaProblem) -> None:
    if p.rnorm == 0:
        raise ValueError("residual is zero; the parameter equation is void")
    lim = p.limit()
    if p.target >= lim:
        raise TargetUnattainable(
            f"target {p.target:.6e} not below the attainable limit {lim:.6e}"
        )


def bisect_alpha(p: AlphaProblem, max_iter: int = 2000) -> float:
    """Plain bisection on ``[0, alpha_max]``."""
    _check(p)
    target, tol = p.target, p.bisect_tol * p.rnorm
    lo, hi = 0.0, p.alpha_max
    if np.sqrt(phi(hi, p)) < target:
        raise TargetUnattainable(f"root lies beyond alpha_max = {p.alpha_max:g}")
    mid = hi
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        val = np.sqrt(phi(mid, p)) - target
        if abs(val) <= tol or hi - lo <= 4 * np.finfo(float).eps * hi:
            break
        if val < 0:
            lo = mid
        else:
            hi = mid
    return float(mid)


def solve_alpha_detailed(p: AlphaProblem, alpha0: float = 1.0) -> AlphaSolution:
    """Newton iteration from ``alpha0`` with bisection fallback."""
    _check(p)
    target, tol = p.target, p.bisect_tol * p.rnorm
    T = target**2
    alpha = float(alpha0)
    # Newton in this form only converges monotonically from above the root
    while phi(alpha, p) < T and alpha < p.alpha_max:
        alpha = min(10.0 * alpha, p.alpha_max)
    iterates = [alpha]
    converged = False
    for _ in range(p.max_newton):
        f, df = phi(alpha, p), phi_prime(alpha, p)
        den = alpha * df + f - T
        if not (np.isfinite(den) and den > 0):
            break
        nxt = alpha * alpha * df / den
        if not (0 < nxt <= p.alpha_max):
            break
        iterates.append(nxt)
        step = abs(nxt - alpha)
        alpha = nxt
        if step <= 1e-14 * alpha:
            converged = abs(np.sqrt(phi(alpha, p)) - target) <= tol
            break
    if converged:
        return AlphaSolution(alpha, "newton", iterates)
    log.debug("Newton failed after %d iterates; bisecting", len(iterates))
    return AlphaSolution(bisect_alpha(p), "bisection", iterates)


def solve_alpha(p: AlphaProblem, alpha0: float = 1.0) -> float:
    """Solve ``sqrt(Phi(alpha)) = t ||r||`` for ``alpha > 0``.

    Raises
    ------
    TargetUnattainable
        If ``t ||r||`` is not below ``||r_hat / w||``.
    ValueError
        If the residual is zero.
    """
    return solve_alpha_detailed(p, alpha0).alpha
