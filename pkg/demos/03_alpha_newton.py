"""Choosing the Tikhonov parameter of each preconditioned step.

At every iteration the step (CC* + alpha Reg)^{-1} r needs an alpha that
damps it by a prescribed ratio q. In the Fourier basis this is one scalar
equation

    Phi(alpha) = sum (alpha / (s + alpha w))^2 |r_hat|^2 = (q ||r||)^2

which is increasing in alpha. Newton's method written in alpha, started
above the root, slides down monotonically and converges quadratically.
This script traces the iterates for a real residual spectrum and compares
with plain bisection.

Run:  python3 demos/03_alpha_newton.py
"""

import time

import numpy as np

from structpista import AlphaProblem, BlurOperator, h_weights, lambda_weights, psf_eigenvalues
from structpista.alphasolve import bisect_alpha, phi, solve_alpha_detailed
from structpista.imagecore import NoiseSpec, add_noise
from structpista.scenes import motion_psf, synthetic_scene
from structpista.spectral import fft2

m = 64
psf = motion_psf(9)
f = synthetic_scene(m, 2)
g, delta = add_noise(BlurOperator(psf, "periodic", m).apply(f), NoiseSpec(2.0, 1))
u = psf_eigenvalues(psf, m)
r = g  # the residual of the zero initial guess

for name, weights in (("h(CC*)", h_weights(u)), ("Laplacian", lambda_weights(m))):
    w = weights.normalized().w
    print(f"\nregularizer {name}")
    for q in (0.3, 0.7, 0.95):
        p = AlphaProblem.from_spectra(u, w, fft2(r), q)
        t0 = time.perf_counter()
        sol = solve_alpha_detailed(p, alpha0=1e-3)
        t_newton = time.perf_counter() - t0
        t0 = time.perf_counter()
        ref = bisect_alpha(p)
        t_bisect = time.perf_counter() - t0
        trace = ", ".join(f"{a:.6g}" for a in sol.iterates[:6])
        print(f"  q = {q}: alpha = {sol.alpha:.10g} ({sol.method}, {len(sol.iterates)} iterates,"
              f" {t_newton * 1e3:.1f} ms; bisection {t_bisect * 1e3:.1f} ms, rel. diff"
              f" {abs(ref - sol.alpha) / sol.alpha:.1e})")
        print(f"         iterates: {trace}{' ...' if len(sol.iterates) > 6 else ''}")
        print(f"         sqrt(Phi)/||r|| = {np.sqrt(phi(sol.alpha, p)) / p.rnorm:.12f}")
