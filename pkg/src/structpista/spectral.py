"""Fourier machinery for BCCB operators.

Two conventions are used on purpose:

* operator eigenvalues (:func:`psf_eigenvalues`) use the *unnormalized*
  forward DFT, so that ``C f = ifft2(u * fft2(f))`` with numpy's default
  scaling;
* norms and residual spectra use the *unitary* transform (:func:`fft2`),
  for which Parseval holds exactly.
"""

from __future__ import annotations

import numpy as np

from .imagecore import DimensionError, Psf

__all__ = [
    "fft2",
    "ifft2",
    "psf_eigenvalues",
    "circ_apply",
    "spectrum_to_mask",
    "laplacian_symbol",
    "NumericalConsistencyError",
]

# imaginary residue tolerated when turning a filtered spectrum back into a mask
MASK_IMAG_TOL = 1e-8


class NumericalConsistencyError(ArithmeticError):
    pass


def fft2(x) -> np.ndarray:
    """Unitary 2-D DFT (forward and inverse both scaled by ``1/m``)."""
    return np.fft.fft2(np.asarray(x), norm="ortho")


def ifft2(x) -> np.ndarray:
    """Inverse of :func:`fft2`."""
    return np.fft.ifft2(np.asarray(x), norm="ortho")


def psf_eigenvalues(psf: Psf, m: int) -> np.ndarray:
    """Eigenvalues of the ``m x m`` BCCB matrix generated by ``psf``.

    The mask is embedded in an ``m x m`` grid with its center moved to index
    ``(0, 0)`` by a circular shift, then transformed with the unnormalized
    DFT.

    Parameters
    ----------
    psf : Psf
        Blur kernel with ``psf.size <= m``.
    m : int
        Side of the image grid.

    Returns
    -------
    ndarray of complex128, shape (m, m)
    """
    k = psf.size
    if k > m:
        raise DimensionError(f"PSF of size {k} does not fit an {m}x{m} grid")
    grid = np.zeros((m, m))
    grid[:k, :k] = psf.mask
    grid = np.roll(grid, (-psf.center[0], -psf.center[1]), axis=(0, 1))
    return np.fft.fft2(grid)


def circ_apply(u, img) -> np.ndarray:
    """Apply the BCCB matrix with eigenvalues ``u`` to ``img``."""
    u = np.asarray(u)
    img = np.asarray(img)
    if u.shape != img.shape:
        raise DimensionError(f"spectrum {u.shape} and image {img.shape} differ")
    return np.real(np.fft.ifft2(u * np.fft.fft2(img)))


def spectrum_to_mask(v) -> Psf:
    """Turn BCCB eigenvalues ``v`` back into a centered ``m x m`` mask.

    Inverse of :func:`psf_eigenvalues` for masks of full size ``m`` centered
    at ``(m // 2, m // 2)``. The imaginary part of the inverse DFT must be
    rounding noise, which holds whenever ``v`` is conjugate-symmetric.
    """
    v = np.asarray(v)
    m = v.shape[0]
    if v.ndim != 2 or v.shape[1] != m:
        raise DimensionError(f"expected a square spectrum, got {v.shape}")
    kernel = np.fft.ifft2(v)
    scale = max(1.0, float(np.max(np.abs(kernel.real))))
    residue = float(np.max(np.abs(kernel.imag)))
    if residue > MASK_IMAG_TOL * scale:
        raise NumericalConsistencyError(
            f"mask has imaginary residue {residue:.3e}; spectrum is not "
            "conjugate-symmetric"
        )
    mask = np.fft.fftshift(kernel.real)
    return Psf(mask, (m // 2, m // 2))


def laplacian_symbol(m: int) -> np.ndarray:
    """Squared modulus of the periodic 5-point Laplacian's eigenvalues.

    ``w[i, j] = (4 - 2 cos(2 pi i / m) - 2 cos(2 pi j / m))**2``.
    """
    if m < 2:
        raise DimensionError("laplacian_symbol needs m >= 2")
    c = 2.0 - 2.0 * np.cos(2.0 * np.pi * np.arange(m) / m)
    return (c[:, None] + c[None, :]) ** 2
