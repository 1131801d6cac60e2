"""Preconditioned iterated soft-thresholding drivers.

All methods share one loop over frame coefficients ``z``::

    x = S_mu(z),  f = W* x,  r = g - K f
    while ||r|| > tau * delta:
        z <- z + step(r)
        x <- S_mu(z)

and differ only in ``step``:

``run_pista``
    ``W C* (CC* + alpha_n Reg)^{-1} r`` applied in the Fourier domain of the
    periodic surrogate ``C``; ``Reg`` is ``h(CC*)`` or the Laplacian.
``run_struct_pista``
    the same Tikhonov-filtered spectrum turned back into a mask and applied
    with the boundary conditions of the model.
``run_ista``
    ``W K^T r / L`` (no preconditioner).
``run_aitgp``
    ``run_pista`` with the Laplacian and no thresholding.

The residual always uses the true operator ``K`` of ``cfg.bc``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
import numpy as np

from .alphasolve import AlphaProblem, TargetUnattainable, solve_alpha
from .boundary import BlurOperator, BoundaryCondition
from .framelet import analysis, synthesis
from .imagecore import DimensionError, Psf, as_image
from .regop import RegKind, RegWeights, h_weights, lambda_weights
from .spectral import fft2, psf_eigenvalues, spectrum_to_mask

__all__ = [
    "SolverConfig",
    "SolverState",
    "NumericalError",
    "soft_threshold",
    "run_pista",
    "run_struct_pista",
    "run_ista",
    "run_aitgp",
    "regularization_weights",
]

log = logging.getLogger(__name__)


class NumericalError(ArithmeticError):
    """Iterates became non-finite."""


@dataclass(frozen=True)
class SolverConfig:
    """Parameters shared by every driver.

    ``alg2_update_scaled`` switches to the update ``z + alpha_n h``;
    ``c1_scaling`` divides the target ratio by ``c1`` and uses
    ``c = c1 / c2`` in the parameter windows (only meaningful for the
    h-function weights).
    """

    rho: float = 0.1
    q: float = 0.5
    mu: float = 0.0
    delta: float = 0.0
    bc: BoundaryCondition = BoundaryCondition.REFLECTIVE
    reg_kind: RegKind = RegKind.HFUNCTION
    structured: bool = False
    max_iter: int = 500
    alg2_update_scaled: bool = False
    c1_scaling: bool = False
    h_exponent: int = 4
    alpha_max: float = 1e12
    max_newton: int = 50
    bisect_tol: float = 1e-10

    def __post_init__(self):
        object.__setattr__(self, "bc", BoundaryCondition.parse(self.bc))
        object.__setattr__(self, "reg_kind", RegKind(self.reg_kind))
        if self.mu < 0:
            raise ValueError("mu must be >= 0")
        if self.delta < 0:
            raise ValueError("delta must be >= 0")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.c1_scaling and self.reg_kind is RegKind.LAMBDA:
            raise ValueError("c1 scaling needs c1 > 0; the Laplacian has c1 = 0")
        if not self.c1_scaling:
            self._check_window(1.0)

    def _check_window(self, c: float) -> None:
        if not 0 < self.rho < c / 2:
            raise ValueError(f"rho must lie in (0, {c / 2:g})")
        if not 2 * self.rho < self.q < c:
            raise ValueError(f"q must lie in (2 rho, {c:g})")

    def c_ratio(self, weights: RegWeights) -> float:
        return weights.c if self.c1_scaling else 1.0

    def tau(self, weights: RegWeights) -> float:
        """Discrepancy multiplier ``(1 + 2 rho) / (c - 2 rho)``."""
        c = self.c_ratio(weights)
        return (1 + 2 * self.rho) / (c - 2 * self.rho)

    def target_ratio(self, q_n: float, weights: RegWeights) -> float:
        return q_n / weights.c1 if self.c1_scaling else q_n


@dataclass
class SolverState:
    n: int
    z: np.ndarray
    x: np.ndarray
    f: np.ndarray
    r: np.ndarray
    tau: float
    alpha_history: list = field(default_factory=list)
    residual_history: list = field(default_factory=list)
    q_history: list = field(default_factory=list)
    status: str = "running"

    @property
    def residual_norm(self) -> float:
        return float(np.linalg.norm(self.r))


def soft_threshold(c, mu: float) -> np.ndarray:
    """Componentwise ``sign(v) * max(|v| - mu, 0)``."""
    if mu < 0:
        raise ValueError("mu must be >= 0")
    c = np.asarray(c, dtype=np.float64)
    if mu == 0:
        return c.copy()
    return np.sign(c) * np.maximum(np.abs(c) - mu, 0.0)


def regularization_weights(u, cfg: SolverConfig) -> RegWeights:
    """Weights used by the drivers, normalized to ``max w = 1``."""
    if cfg.reg_kind is RegKind.LAMBDA:
        return lambda_weights(u.shape[0]).normalized()
    return h_weights(u, cfg.h_exponent).normalized()


def _iterate(g, psf: Psf, cfg: SolverConfig, z0, make_step, callback) -> tuple:
    g = as_image(g)
    m = g.shape[0]
    K = BlurOperator(psf, cfg.bc, m)
    z = analysis(g) if z0 is None else np.array(z0, dtype=np.float64)
    if z.shape != (3, 3, m, m):
        raise DimensionError(f"z0 must have shape (3, 3, {m}, {m}), got {z.shape}")
    step, tau = make_step(K)
    x = soft_threshold(z, cfg.mu)
    f = synthesis(x)
    r = g - K.apply(f)
    state = SolverState(0, z, x, f, r, tau)
    state.residual_history.append(state.residual_norm)
    if callback is not None:
        callback(state)

    while True:
        rnorm = state.residual_history[-1]
        if rnorm <= tau * cfg.delta:
            state.status = "discrepancy"
            break
        if state.n >= cfg.max_iter:
            state.status = "max-iter"
            break
        h = step(state.r, state)
        if h is None:
            break
        state.z = state.z + h
        state.x = soft_threshold(state.z, cfg.mu)
        state.f = synthesis(state.x)
        state.r = g - K.apply(state.f)
        state.n += 1
        rnorm = state.residual_norm
        if not np.isfinite(rnorm):
            state.status = "non-finite"
            raise NumericalError(f"non-finite residual at iteration {state.n}")
        state.residual_history.append(rnorm)
        if callback is not None:
            callback(state)
    log.info("stopped after %d iterations (%s), ||r|| = %.4e",
             state.n, state.status, state.residual_history[-1])
    return state.f, state


def _preconditioned(psf: Psf, cfg: SolverConfig, structured: bool):
    def make_step(K: BlurOperator):
        m = K.m
        u = psf_eigenvalues(psf, m)
        s = np.abs(u) ** 2
        weights = regularization_weights(u, cfg)
        if cfg.c1_scaling:
            cfg._check_window(weights.c)
        tau = cfg.tau(weights)
        u_conj = np.conj(u)

        def step(r, state: SolverState):
            rnorm = state.residual_history[-1]
            tau_n = rnorm / cfg.delta if cfg.delta > 0 else np.inf
            q_n = max(cfg.q, 2 * cfg.rho + (1 + cfg.rho) / tau_n)
            problem = AlphaProblem(
                s, weights.w, np.abs(fft2(r)) ** 2,
                cfg.target_ratio(q_n, weights),
                alpha_max=cfg.alpha_max, max_newton=cfg.max_newton,
                bisect_tol=cfg.bisect_tol,
            )
            alpha0 = state.alpha_history[-1] if state.alpha_history else 1.0
            try:
                alpha = solve_alpha(problem, alpha0)
            except TargetUnattainable as exc:
                log.warning("iteration %d: %s; stopping", state.n, exc)
                state.status = "alpha-failed"
                return None
            state.q_history.append(q_n)
            state.alpha_history.append(alpha)
            v = u_conj / (s + alpha * weights.w)
            if structured:
                P = BlurOperator(spectrum_to_mask(v), cfg.bc, m)
                h_img = P.apply(r)
            else:
                h_img = np.real(np.fft.ifft2(v * np.fft.fft2(r)))
            h = analysis(h_img)
            return alpha * h if cfg.alg2_update_scaled else h

        return step, tau

    return make_step


def run_pista(g, psf: Psf, cfg: SolverConfig, z0=None, callback=None):
    """PISTA with the Fourier-domain (periodic surrogate) preconditioner.

    Parameters
    ----------
    g : (m, m) array
        Observed image.
    psf : Psf
        Blur kernel.
    cfg : SolverConfig
        ``cfg.reg_kind`` selects ``h(CC*)`` or the Laplacian.
    z0 : (3, 3, m, m) array, optional
        Initial frame coefficients; defaults to ``analysis(g)``.
    callback : callable, optional
        Called with the :class:`SolverState` after initialization and after
        every iteration.

    Returns
    -------
    f : (m, m) array
        ``W* x`` at termination.
    state : SolverState
    """
    return _iterate(g, psf, cfg, z0, _preconditioned(psf, cfg, False), callback)


def run_struct_pista(g, psf: Psf, cfg: SolverConfig, z0=None, callback=None):
    """PISTA whose preconditioner keeps the boundary structure of the blur.

    Each iteration builds the mask of the filtered eigenvalues
    ``conj(u) / (|u|^2 + alpha_n w)`` and applies it under ``cfg.bc``.
    With periodic boundaries this coincides with :func:`run_pista`.
    """
    return _iterate(g, psf, cfg, z0, _preconditioned(psf, cfg, True), callback)


def run_ista(g, psf: Psf, cfg: SolverConfig, z0=None, callback=None):
    """Thresholded Landweber: ``z <- z + W K^T r / L`` with ``L = max |u|^2``."""

    def make_step(K: BlurOperator):
        u = psf_eigenvalues(psf, K.m)
        L = float(np.max(np.abs(u)) ** 2)
        if L == 0:
            raise ValueError("PSF has zero spectrum")

        def step(r, state):
            return analysis(K.apply_adjoint(r)) / L

        weights = RegWeights(np.ones_like(u.real), 1.0, 1.0, RegKind.HFUNCTION)
        return step, cfg.tau(weights)

    return _iterate(g, psf, cfg, z0, make_step, callback)


def run_aitgp(g, psf: Psf, cfg: SolverConfig, z0=None, callback=None):
    """Approximated iterated Tikhonov with the Laplacian and no thresholding."""
    cfg = replace(cfg, mu=0.0, reg_kind=RegKind.LAMBDA, c1_scaling=False)
    return run_pista(g, psf, cfg, z0, callback)
